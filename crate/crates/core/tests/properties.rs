use flagcert_core::forms::StandardModel;
use flagcert_core::linalg::{hermitian_signature, Matrix, Subspace, Vector};
use flagcert_core::serial::{matrix_from_json, matrix_to_json, scalar_from_json, scalar_to_json};
use flagcert_core::{Scalar, Tower};
use proptest::prelude::*;

fn gaussian() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, -6i64..=6, 1i64..=4)
        .prop_map(|(a, b, d)| &Scalar::gaussian_int(a, b) * &Scalar::from_ratio(1, d))
}

/// `a + b√2 + c√3 + d√6` in `Q(i)(√2)(√3)`.
fn tower_scalar() -> impl Strategy<Value = Scalar> {
    prop::collection::vec(gaussian(), 4).prop_map(|c| {
        let (t2, r2) = Tower::base().sqrt(&Scalar::from_int(2)).unwrap();
        let (_, r3) = t2.sqrt(&Scalar::from_int(3)).unwrap();
        let r6 = &r2 * &r3;
        &(&c[0] + &(&c[1] * &r2)) + &(&(&c[2] * &r3) + &(&c[3] * &r6))
    })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |v| Matrix::from_fn(rows, cols, |r, c| Scalar::from_int(v[r * cols + c])))
}

fn complex_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((-3i64..=3, -3i64..=3), rows * cols).prop_map(move |v| {
        Matrix::from_fn(rows, cols, |r, c| {
            let (a, b) = v[r * cols + c];
            Scalar::gaussian_int(a, b)
        })
    })
}

fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec((-4i64..=4, -4i64..=4), dim).prop_map(|v| {
        v.into_iter()
            .map(|(a, b)| Scalar::gaussian_int(a, b))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(x in tower_scalar(), y in tower_scalar(), z in tower_scalar()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(x in tower_scalar(), y in tower_scalar()) {
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
        let n = &x * &x.conj();
        prop_assert!(n.is_real());
        prop_assert!(n.sign().unwrap() >= 0);
        prop_assert_eq!(n.sign().unwrap() == 0, x.is_zero());
    }

    #[test]
    fn square_roots_square_back(a in 1i64..=50, b in 1i64..=7) {
        let r = Scalar::from_ratio(a, b);
        let (_, s) = Tower::base().sqrt(&r).unwrap();
        prop_assert_eq!(&s * &s, r);
        prop_assert_eq!(s.sign().unwrap(), 1);
    }

    #[test]
    fn scalar_serialization_round_trips(x in tower_scalar()) {
        let back = scalar_from_json(&scalar_to_json(&x)).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn matrix_serialization_round_trips(m in complex_matrix(2, 3), s in tower_scalar()) {
        let m = m.scale(&s);
        let back = matrix_from_json(&matrix_to_json(&m)).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn rank_of_transpose(a in complex_matrix(3, 4)) {
        prop_assert_eq!(a.rank(), a.transpose().rank());
        prop_assert_eq!(a.rank(), a.adjoint().rank());
    }

    #[test]
    fn rank_nullity(a in matrix(3, 5)) {
        let k = a.kernel();
        prop_assert_eq!(a.rank() + k.dim(), 5);
        for v in k.basis_vectors() {
            prop_assert!(a.mul_vec(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn echelon_form_is_idempotent(a in complex_matrix(4, 4)) {
        let (r, pivots) = a.rref();
        let (rr, pivots2) = r.rref();
        prop_assert_eq!(rr, r);
        prop_assert_eq!(pivots2, pivots);
    }

    #[test]
    fn determinant_is_multiplicative(a in complex_matrix(3, 3), b in complex_matrix(3, 3)) {
        prop_assert_eq!(a.mul(&b).det(), &a.det() * &b.det());
        if !a.det().is_zero() {
            prop_assert_eq!(a.mul(&a.inverse().unwrap()), Matrix::identity(3));
        }
    }

    #[test]
    fn signature_is_a_congruence_invariant(c in complex_matrix(3, 3), p in complex_matrix(3, 3)) {
        let h = c.add(&c.adjoint());
        prop_assume!(!p.det().is_zero());
        let moved = p.adjoint().mul(&h).mul(&p);
        prop_assert_eq!(hermitian_signature(&moved).unwrap(), hermitian_signature(&h).unwrap());
    }

    #[test]
    fn structure_map_relations(z in vector(4), w in vector(4)) {
        let split = StandardModel::projective_split(2).unwrap();
        let pq = StandardModel::projective_pq(1, 1).unwrap();
        for (m, square, h_sign) in [(&split, 1i64, -1i64), (&pq, -1, 1)] {
            let phi = |v: &[Scalar]| m.phi(v).unwrap();
            let pz = phi(&z);
            let pw = phi(&w);
            let sq: Vector = z.iter().map(|x| x * &Scalar::from_int(square)).collect();
            prop_assert_eq!(phi(&pz), sq);
            let h = m.h();
            let omega = m.omega().unwrap();
            prop_assert_eq!(h.value(&pz, &pw), &Scalar::from_int(h_sign) * &h.value(&z, &w).conj());
            prop_assert_eq!(h.value(&z, &w), omega.value(&z, &pw));
        }
    }

    #[test]
    fn h_and_omega_perps_agree_on_phi_stable_planes(z in vector(4)) {
        prop_assume!(z.iter().any(|x| !x.is_zero()));
        for m in [StandardModel::projective_split(2).unwrap(), StandardModel::projective_pq(1, 1).unwrap()] {
            let plane = Subspace::span(4, &[z.clone(), m.phi(&z).unwrap()]);
            let a = m.h().perp(&plane);
            let b = m.omega().unwrap().perp(&plane);
            prop_assert!(a.column_space_equal(&b).unwrap());
        }
    }
}
