//! Split octonions in the Zorn vector-matrix model, their derivation
//! algebra (split `g₂`) and its restriction to the imaginary part in the
//! coordinates where the norm is `diag(1,1,1,−1,−1,−1,−1)`.
//!
//! An element is `(a, v; w, b)` with `a, b` scalars and `v, w ∈ C³`:
//!
//! ```text
//! (a,v;w,b)·(a',v';w',b') = (aa' + v·w',  av' + b'v − w×w';
//!                            a'w + bw' + v×v',  bb' + w·v')
//! N(a,v;w,b) = ab − v·w
//! ```
//!
//! Basis: `e₀ = (1,0;0,1)`, `e₁ = (1,0;0,−1)`, `e₂,e₃,e₄ = 2vᵢ` and
//! `e₅,e₆,e₇ = 2wᵢ`, which keeps every structure constant an integer.

use std::sync::Arc;

use thiserror::Error;

use crate::forms::e_pq;
use crate::linalg::{
    self, solve_linear_constraints, Ground, LieAlgebraBasis, LinearCondition, Matrix, Pairing,
    Vector,
};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OctonionError {
    #[error("derivation algebra has dimension {0}, expected 14")]
    WrongDerivationDimension(usize),
    #[error("imaginary norm does not have signature (3,4)")]
    WrongSignature,
    #[error("restricted derivation does not preserve the quadric form")]
    NotOrthogonal,
}

/// A finite-dimensional algebra given by its structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OctonionAlgebra {
    dim: usize,
    unit: usize,
    /// `table[i][j]` = coordinates of `eᵢ·eⱼ`.
    table: Vec<Vec<Vector>>,
    norm_gram: Matrix,
}

type Zorn = (i64, [i64; 3], [i64; 3], i64);

fn dot(a: &[i64; 3], b: &[i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn zorn_mul(x: &Zorn, y: &Zorn) -> Zorn {
    let (a, v, w, b) = x;
    let (a2, v2, w2, b2) = y;
    let wx = cross(w, w2);
    let vx = cross(v, v2);
    let mut nv = [0; 3];
    let mut nw = [0; 3];
    for k in 0..3 {
        nv[k] = a * v2[k] + b2 * v[k] - wx[k];
        nw[k] = a2 * w[k] + b * w2[k] + vx[k];
    }
    (a * a2 + dot(v, w2), nv, nw, b * b2 + dot(w, v2))
}

fn zorn_basis(k: usize) -> Zorn {
    let mut v = [0; 3];
    let mut w = [0; 3];
    match k {
        0 => (1, v, w, 1),
        1 => (1, v, w, -1),
        2..=4 => {
            v[k - 2] = 2;
            (0, v, w, 0)
        }
        _ => {
            w[k - 5] = 2;
            (0, v, w, 0)
        }
    }
}

/// Coordinates of a Zorn element with even vector parts.
fn zorn_coords(x: &Zorn) -> [i64; 8] {
    let (a, v, w, b) = x;
    assert!((a + b) % 2 == 0 && v.iter().chain(w).all(|c| c % 2 == 0));
    [
        (a + b) / 2,
        (a - b) / 2,
        v[0] / 2,
        v[1] / 2,
        v[2] / 2,
        w[0] / 2,
        w[1] / 2,
        w[2] / 2,
    ]
}

/// The split octonions.
pub fn split_octonions() -> OctonionAlgebra {
    let table = (0..8)
        .map(|i| {
            (0..8)
                .map(|j| {
                    let c = zorn_coords(&zorn_mul(&zorn_basis(i), &zorn_basis(j)));
                    linalg::int_vector(&c)
                })
                .collect()
        })
        .collect();
    let mut g = Matrix::diag_int(&[1, -1, 0, 0, 0, 0, 0, 0]);
    for k in 0..3 {
        g.set(2 + k, 5 + k, Scalar::from_int(-2));
        g.set(5 + k, 2 + k, Scalar::from_int(-2));
    }
    OctonionAlgebra {
        dim: 8,
        unit: 0,
        table,
        norm_gram: g,
    }
}

impl OctonionAlgebra {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn norm_gram(&self) -> &Matrix {
        &self.norm_gram
    }

    pub fn product(&self, i: usize, j: usize) -> &Vector {
        &self.table[i][j]
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    if !t.is_zero() {
                        *o = &*o + &(&c * t);
                    }
                }
            }
        }
        out
    }

    /// `N(x) = xᵗ·norm_gram·x`.
    pub fn norm(&self, x: &[Scalar]) -> Scalar {
        let gx = self.norm_gram.mul_vec(x);
        x.iter()
            .zip(&gx)
            .fold(Scalar::zero(), |a, (p, q)| &a + &(p * q))
    }

    /// Structure constants as integers, `c[i][j][k]`; `None` once rebased
    /// to a basis with fractional constants.
    pub fn integer_table(&self) -> Option<Vec<Vec<Vec<i64>>>> {
        self.table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        v.iter()
                            .map(|s| {
                                let q = s.as_rational()?;
                                if q.is_integer() {
                                    i64::try_from(q.numer().clone()).ok()
                                } else {
                                    None
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// The same algebra in the basis given by the columns of `b`; column 0
    /// must be the unit.
    pub fn rebased(&self, b: &Matrix) -> OctonionAlgebra {
        let binv = b.inverse().expect("change of basis must be invertible");
        let cols = b.columns();
        let table = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| binv.mul_vec(&self.mul(&cols[i], &cols[j])))
                    .collect()
            })
            .collect();
        OctonionAlgebra {
            dim: self.dim,
            unit: 0,
            table,
            norm_gram: b.transpose().mul(&self.norm_gram).mul(b),
        }
    }

    /// `D(eᵢ·eⱼ) − D(eᵢ)·eⱼ − eᵢ·D(eⱼ)` over all basis pairs.
    pub fn derivation_residual(&self, d: &Matrix) -> Vector {
        let cols = d.columns();
        let mut out = Vec::with_capacity(self.dim * self.dim * self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = d.mul_vec(&self.table[i][j]);
                let a = self.mul(&cols[i], &linalg::unit(self.dim, j));
                let b = self.mul(&linalg::unit(self.dim, i), &cols[j]);
                for k in 0..self.dim {
                    out.push(&(&lhs[k] - &a[k]) - &b[k]);
                }
            }
        }
        out
    }

    /// `g(eᵢ·eⱼ) − g(eᵢ)·g(eⱼ)` over all basis pairs.
    pub fn automorphism_residual(&self, g: &Matrix) -> Vector {
        let cols = g.columns();
        let mut out = Vec::with_capacity(self.dim * self.dim * self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = g.mul_vec(&self.table[i][j]);
                let rhs = self.mul(&cols[i], &cols[j]);
                out.extend(lhs.iter().zip(&rhs).map(|(a, b)| a - b));
            }
        }
        out
    }
}

/// Columns: an orthogonal basis `q₁,…,q₇` of the imaginary part with
/// `N(qₖ) = +1` for `k ≤ 3` and `−1` otherwise:
/// `qᵢ = vᵢ − wᵢ`, `q₄ = e₁`, `q₄₊ᵢ = vᵢ + wᵢ`.
pub fn quadric_coordinates() -> Matrix {
    let h = Scalar::from_ratio(1, 2);
    let mut c = Matrix::zeros(8, 7);
    for i in 0..3 {
        c.set(2 + i, i, h.clone());
        c.set(5 + i, i, -&h);
        c.set(2 + i, 4 + i, h.clone());
        c.set(5 + i, 4 + i, h.clone());
    }
    c.set(1, 3, Scalar::one());
    c
}

/// `[e₀ | q₁ … q₇]`.
pub fn quadric_frame() -> Matrix {
    Matrix::from_columns(8, &[linalg::unit(8, 0)]).hstack(&quadric_coordinates())
}

/// The split octonions in the basis `e₀, q₁, …, q₇`.
pub fn quadric_octonions() -> Arc<OctonionAlgebra> {
    Arc::new(split_octonions().rebased(&quadric_frame()))
}

/// Derivations of an octonion algebra with their action on the imaginary
/// part in quadric coordinates.
#[derive(Clone, Debug)]
pub struct DerivationBasis {
    pub algebra: LieAlgebraBasis,
    pub restricted_rep: Vec<Matrix>,
}

/// Solves the derivation identity as one system in 64 unknowns.
pub fn derivations(a: &OctonionAlgebra) -> Result<DerivationBasis, OctonionError> {
    let alg = Arc::new(a.clone());
    let cond = LinearCondition::Custom(Arc::new(move |d: &Matrix| alg.derivation_residual(d)));
    let solved = solve_linear_constraints(a.dim(), &[cond], false);
    // rational solutions: the real span has the same dimension
    let algebra = LieAlgebraBasis::from_elements(a.dim(), solved.elements().to_vec(), Ground::Real);
    if algebra.dim() != 14 {
        return Err(OctonionError::WrongDerivationDimension(algebra.dim()));
    }
    let frame = quadric_frame();
    let finv = frame.inverse().expect("quadric frame is invertible");
    let idx: Vec<usize> = (1..8).collect();
    let restricted_rep = algebra
        .elements()
        .iter()
        .map(|d| finv.mul(d).mul(&frame).submatrix(&idx, &idx))
        .collect();
    Ok(DerivationBasis {
        algebra,
        restricted_rep,
    })
}

/// Signature of the norm on the imaginary part `span{e₁,…,e₇}`.
pub fn imaginary_signature(a: &OctonionAlgebra) -> linalg::Signature {
    let idx: Vec<usize> = (0..a.dim()).filter(|&k| k != a.unit()).collect();
    let g = a.norm_gram().submatrix(&idx, &idx);
    linalg::hermitian_signature(&g).expect("real symmetric Gram")
}

/// The restricted derivations as a real Lie algebra of `7×7` matrices,
/// each checked to preserve `diag(1,1,1,−1,−1,−1,−1)`.
pub fn imaginary_embedding(d: &DerivationBasis) -> Result<LieAlgebraBasis, OctonionError> {
    let c = quadric_coordinates();
    let gram = e_pq(3, 4);
    let octo = split_octonions();
    if c.transpose().mul(octo.norm_gram()).mul(&c) != gram {
        return Err(OctonionError::WrongSignature);
    }
    let (_, diag) = linalg::congruence_diagonalize(&gram, Pairing::Bilinear);
    debug_assert_eq!(diag.len(), 7);
    for x in &d.restricted_rep {
        if !x.transpose().mul(&gram).add(&gram.mul(x)).is_zero() {
            return Err(OctonionError::NotOrthogonal);
        }
    }
    Ok(LieAlgebraBasis::from_elements(
        7,
        d.restricted_rep.clone(),
        Ground::Real,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vector, unit, vadd};

    fn sample(k: i64) -> Vector {
        int_vector(&[k, 1 - k, 2, -1, k, 3, -2 * k, 1])
    }

    #[test]
    fn unit_and_norm() {
        let o = split_octonions();
        assert_eq!(o.product(0, 0), &unit(8, 0));
        assert_eq!(o.norm(&unit(8, 0)), Scalar::one());
        for k in 0..8 {
            assert_eq!(o.product(0, k), &unit(8, k));
            assert_eq!(o.product(k, 0), &unit(8, k));
        }
        assert!(o.integer_table().is_some());
    }

    #[test]
    fn alternative_on_basis_pairs() {
        let o = split_octonions();
        for i in 0..8 {
            for j in 0..8 {
                let x = unit(8, i);
                let y = unit(8, j);
                let xx = o.mul(&x, &x);
                assert_eq!(o.mul(&xx, &y), o.mul(&x, &o.mul(&x, &y)), "left {i} {j}");
                assert_eq!(o.mul(&y, &xx), o.mul(&o.mul(&y, &x), &x), "right {i} {j}");
            }
        }
    }

    #[test]
    fn alternative_and_composition_on_samples() {
        let o = split_octonions();
        for k in -2..3 {
            let x = sample(k);
            let y = vadd(&sample(k + 1), &unit(8, 3));
            let xx = o.mul(&x, &x);
            assert_eq!(o.mul(&xx, &y), o.mul(&x, &o.mul(&x, &y)));
            assert_eq!(o.mul(&y, &xx), o.mul(&o.mul(&y, &x), &x));
            assert_eq!(o.norm(&o.mul(&x, &y)), &o.norm(&x) * &o.norm(&y));
        }
    }

    #[test]
    fn norm_signatures() {
        let o = split_octonions();
        assert_eq!(
            linalg::hermitian_signature(o.norm_gram()).unwrap(),
            linalg::Signature::new(4, 4, 0)
        );
        assert_eq!(imaginary_signature(&o), linalg::Signature::new(3, 4, 0));
        let c = quadric_coordinates();
        assert_eq!(c.transpose().mul(o.norm_gram()).mul(&c), e_pq(3, 4));
    }

    #[test]
    fn derivations_are_g2() {
        let o = split_octonions();
        let d = derivations(&o).unwrap();
        assert_eq!(d.algebra.dim(), 14);
        assert!(d.algebra.is_bracket_closed());
        for x in d.algebra.elements() {
            assert!(linalg::is_zero_vec(&o.derivation_residual(x)));
            assert!(linalg::is_zero_vec(&x.column(0)));
        }
        let emb = imaginary_embedding(&d).unwrap();
        assert_eq!(emb.dim(), 14);
        assert_eq!(emb.complexified().dim(), 14);
    }

    #[test]
    fn rebased_algebra_keeps_unit_and_norm() {
        let q = quadric_octonions();
        for k in 0..8 {
            assert_eq!(q.product(0, k), &unit(8, k));
        }
        assert_eq!(
            q.norm_gram(),
            &Matrix::block_diag(&Matrix::identity(1), &e_pq(3, 4))
        );
    }
}
