use flagcert_core::forms::StandardModel;
use flagcert_core::groups::{self, isotropy_subalgebra, nilpotent_exp, GroupSpec, Point};
use flagcert_core::linalg::{int_vector, solve_linear_constraints, unit, Matrix, Subspace, Vector};
use flagcert_core::orbits::{
    classify_point, quadric_representatives, random_so34_element, tangent_dim_grassmann,
    tangent_dim_projective, QuadricAlgebras, Stratum,
};
use flagcert_core::sampling::{self, SeededRng};
use flagcert_core::Scalar;
use rand::SeedableRng;

fn every_group() -> Vec<GroupSpec> {
    vec![
        groups::sp2n_c(2).unwrap(),
        groups::sl2n_c(2).unwrap(),
        groups::su_nn(2).unwrap(),
        groups::sp2n_r(2).unwrap(),
        groups::sp_2p2q(1, 1).unwrap(),
        groups::su_2p2q(1, 1).unwrap(),
        groups::so7_c(),
        groups::so34(),
        groups::g2_split(),
        groups::so2n_c(3).unwrap(),
        groups::so2n1_c(3).unwrap(),
        groups::so_pq(2, 3).unwrap(),
    ]
}

#[test]
fn identity_is_in_every_group() {
    for g in every_group() {
        assert!(
            g.contains(&Matrix::identity(g.ambient_dim())).unwrap(),
            "{}",
            g.name()
        );
    }
}

#[test]
fn diagonal_membership() {
    let d = Matrix::diag(&[Scalar::from_int(2), Scalar::from_ratio(1, 2)]);
    assert!(groups::sp2n_c(1).unwrap().contains(&d).unwrap());
    assert!(!groups::su_nn(1).unwrap().contains(&d).unwrap());
}

#[test]
fn real_forms_match_complex_dimensions() {
    for n in 1..=3 {
        let c = groups::sp2n_c(n).unwrap().lie_algebra().dim();
        assert_eq!(groups::sp2n_r(n).unwrap().lie_algebra().dim(), c);
        assert_eq!(
            groups::sl2n_c(n).unwrap().lie_algebra().dim(),
            4 * n * n - 1
        );
    }
    assert_eq!(groups::sp_2p2q(2, 1).unwrap().lie_algebra().dim(), 21);
    assert_eq!(groups::su_2p2q(1, 1).unwrap().lie_algebra().dim(), 15);
    assert_eq!(
        groups::so34().lie_algebra().dim(),
        groups::so7_c().lie_algebra().dim()
    );
    for (p, q) in [(2usize, 1usize), (2, 3), (3, 2)] {
        let n = (p + q).div_ceil(2);
        assert_eq!(
            groups::so_pq(p, q).unwrap().lie_algebra().dim(),
            groups::so2n1_c(n).unwrap().lie_algebra().dim()
        );
    }
}

fn small_vectors(n: usize) -> Vec<Vector> {
    let units = [Scalar::one(), -Scalar::one(), Scalar::i(), -Scalar::i()];
    let mut out = Vec::new();
    for a in 0..n {
        out.push(unit(n, a));
        for b in a + 1..n {
            for c in &units {
                let mut u = unit(n, a);
                u[b] = c.clone();
                out.push(u);
            }
        }
    }
    out
}

/// Elements with image in `P` and `X(P) = 0`, so `X² = 0`, for the first
/// small line or plane `P` that admits any.
fn nilpotent_elements(l: &flagcert_core::LieAlgebraBasis) -> Vec<Matrix> {
    let n = l.ambient_dim();
    let vs = small_vectors(n);
    let lines = vs.iter().map(|u| vec![u.clone()]);
    let planes = vs
        .iter()
        .enumerate()
        .flat_map(|(k, u)| vs[k + 1..].iter().map(move |v| vec![u.clone(), v.clone()]));
    for basis in lines.chain(planes) {
        let p = Subspace::span(n, &basis);
        if p.dim() < basis.len() {
            continue;
        }
        let ann = p.annihilator();
        let found = l.solve_in_span(|x| {
            let mut r = ann.mul(x).entries().to_vec();
            for u in &basis {
                r.extend(x.mul_vec(u));
            }
            r
        });
        if found.dim() > 0 {
            return found.elements().to_vec();
        }
    }
    Vec::new()
}

#[test]
fn nilpotent_exponentials_stay_in_their_groups() {
    for g in every_group() {
        let nil = nilpotent_elements(&g.lie_algebra());
        assert!(
            !nil.is_empty(),
            "{} has no small nilpotent element",
            g.name()
        );
        for x in &nil {
            assert!(x.mul(x).is_zero());
            let e = nilpotent_exp(x, &Scalar::from_ratio(2, 3)).unwrap();
            assert!(g.contains(&e).unwrap(), "{}", g.name());
        }
    }
}

#[test]
fn isotropy_examples() {
    let gl = solve_linear_constraints(4, &[], false);
    let q = isotropy_subalgebra(&gl, &Point::Line(unit(4, 0)));
    assert_eq!(gl.dim() - q.dim(), 3);
    assert!(q.is_bracket_closed());
    let sp = groups::sp2n_c(2).unwrap().lie_algebra();
    let z = int_vector(&[1, -2, 3, 1]);
    let q = isotropy_subalgebra(&sp, &Point::Line(z));
    assert_eq!(sp.dim() - q.dim(), 3);
    assert!(q.is_bracket_closed());
    for n in 2..=3 {
        let m = StandardModel::isotropic(n, 2, 2 * n - 3).unwrap();
        let so = groups::so2n1_c(n).unwrap().lie_algebra();
        let q = isotropy_subalgebra(&so, &Point::Subspace(m.normal_form_complex().unwrap()));
        assert_eq!(so.dim() - q.dim(), n * (n - 1) / 2);
        assert!(q.is_bracket_closed());
    }
}

#[test]
fn unit_disc_is_open() {
    let su11 = groups::su_nn(1).unwrap().lie_algebra();
    assert_eq!(tangent_dim_projective(&su11, &unit(2, 0)).unwrap(), 2);
    let sl2 = groups::sl2n_c(1).unwrap().lie_algebra();
    assert_eq!(
        tangent_dim_projective(&sl2, &int_vector(&[3, 7])).unwrap(),
        1
    );
}

#[test]
fn quadric_classification_examples() {
    let m = StandardModel::quadric7();
    let line = |v: Vec<Scalar>| Point::Line(v);
    let i = Scalar::i();
    let z_plus = vec![
        Scalar::one(),
        i.clone(),
        Scalar::zero(),
        Scalar::zero(),
        Scalar::zero(),
        Scalar::zero(),
        Scalar::zero(),
    ];
    assert_eq!(
        classify_point(&m, &line(z_plus)).unwrap(),
        Stratum::Positive
    );
    let real = int_vector(&[0, 0, 1, 1, 0, 0, 0]);
    assert_eq!(classify_point(&m, &line(real)).unwrap(), Stratum::NullReal);
    let mut z_minus = vec![Scalar::zero(); 7];
    z_minus[3] = Scalar::one();
    z_minus[4] = i;
    assert_eq!(
        classify_point(&m, &line(z_minus)).unwrap(),
        Stratum::Negative
    );
}

/// The smaller complex algebra of each inclusion has the same tangent
/// dimension as the larger one at sampled points of the manifold.
#[test]
fn onishchik_pairs_agree_at_sampled_points() {
    let mut rng = SeededRng::seed_from_u64(17);
    for n in 1..=3 {
        let sp = groups::sp2n_c(n).unwrap().lie_algebra();
        let sl = groups::sl2n_c(n).unwrap().lie_algebra();
        for _ in 0..5 {
            let z = sampling::gaussian_vector(&mut rng, 2 * n, 5);
            let d = tangent_dim_projective(&sp, &z).unwrap();
            assert_eq!(d, tangent_dim_projective(&sl, &z).unwrap());
            assert_eq!(d, 2 * n - 1);
        }
    }
    let g2 = QuadricAlgebras::build().unwrap().g2.complexified();
    let so7 = groups::so7_c().lie_algebra();
    for (_, rep) in quadric_representatives() {
        for _ in 0..3 {
            let z = random_so34_element(&mut rng, 4).mul_vec(&rep);
            assert_eq!(tangent_dim_projective(&g2, &z).unwrap(), 5);
            assert_eq!(tangent_dim_projective(&so7, &z).unwrap(), 5);
        }
    }
    for n in 2..=3 {
        let m = StandardModel::isotropic(n, 2, 2 * n - 3).unwrap();
        let small = groups::so2n1_c(n).unwrap().lie_algebra();
        let big = groups::so2n_c(n).unwrap().lie_algebra();
        for _ in 0..3 {
            let s: Subspace = sampling::scrambled_complex_plane(&m, &mut rng, 3).unwrap();
            let a = tangent_dim_grassmann(&small, &s, Some(m.b())).unwrap();
            assert_eq!(a, tangent_dim_grassmann(&big, &s, Some(m.b())).unwrap());
            assert_eq!(a, n * (n - 1) / 2);
        }
    }
}

#[test]
fn real_open_orbit_agrees_with_complex_transitivity() {
    // open under so(p,q) implies full complex tangent dimension under so2n-1
    let mut rng = SeededRng::seed_from_u64(23);
    let m = StandardModel::isotropic(3, 3, 2).unwrap();
    let real = groups::so_pq(3, 2).unwrap().lie_algebra();
    let complex = groups::so2n1_c(3).unwrap().lie_algebra();
    for _ in 0..3 {
        let s = sampling::scrambled_real_plane(&m, &mut rng, 3).unwrap();
        assert_eq!(tangent_dim_grassmann(&real, &s, Some(m.b())).unwrap(), 6);
        assert_eq!(tangent_dim_grassmann(&complex, &s, Some(m.b())).unwrap(), 3);
    }
}
