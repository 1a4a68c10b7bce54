//! Tangent dimensions of Lie algebra orbits at points of the model
//! manifolds, stratum classification, and the sampled comparison of split
//! `g₂` with `so(3,4)` on the quadric.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::forms::{is_real_line, pair_vector, FormError, FormSpec, ModelCase, StandardModel};
use crate::groups::{self, nilpotent_exp, quotient_map, Point};
use crate::linalg::{
    is_zero_vec, realify, unit, vadd, vscale, Ground, LieAlgebraBasis, Matrix, Signature, Subspace,
    Vector,
};
use crate::octonions::{self, OctonionError};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("the point is the zero vector")]
    ZeroVector,
    #[error("the point is not on the model manifold")]
    NotOnManifold,
    #[error("the subspace is not isotropic for the ambient form")]
    NotIsotropic,
    #[error("the algebra acts on C^{algebra}, the point lives in C^{point}")]
    DimensionMismatch { algebra: usize, point: usize },
    #[error("sample {0} left its stratum")]
    StratumDrift(usize),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Octonion(#[from] OctonionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stratum {
    Positive,
    Negative,
    NullReal,
    NullNonreal,
    Signature { signature: Signature, open: bool },
}

impl Stratum {
    pub fn label(&self) -> String {
        match self {
            Stratum::Positive => "positive".into(),
            Stratum::Negative => "negative".into(),
            Stratum::NullReal => "null-real".into(),
            Stratum::NullNonreal => "null-nonreal".into(),
            Stratum::Signature { signature, open } => format!(
                "signature({},{},{}){}",
                signature.pos,
                signature.neg,
                signature.zero,
                if *open { " open" } else { "" }
            ),
        }
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for Stratum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

fn rank_of(vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(vectors[0].len(), vectors).rank()
}

fn ground_vec(v: &[Scalar], ground: Ground) -> Vector {
    match ground {
        Ground::Complex => v.to_vec(),
        Ground::Real => realify(v),
    }
}

/// Dimension of `{X·z} mod span{z}` over the ground field (for a real
/// algebra, modulo the real plane `span_R{z, iz}`).
pub fn tangent_dim_projective(l: &LieAlgebraBasis, z: &[Scalar]) -> Result<usize, OrbitError> {
    if is_zero_vec(z) {
        return Err(OrbitError::ZeroVector);
    }
    if z.len() != l.ambient_dim() {
        return Err(OrbitError::DimensionMismatch {
            algebra: l.ambient_dim(),
            point: z.len(),
        });
    }
    let g = l.ground();
    let mut vs = vec![ground_vec(z, g)];
    if g == Ground::Real {
        vs.push(realify(&vscale(&Scalar::i(), z)));
    }
    let base = vs.len();
    vs.extend(l.elements().iter().map(|x| ground_vec(&x.mul_vec(z), g)));
    Ok(rank_of(&vs) - base)
}

/// Dimension of the image of `X ↦ (s ↦ X·s mod S)` over the ground field.
pub fn tangent_dim_grassmann(
    l: &LieAlgebraBasis,
    s: &Subspace,
    ambient_constraint: Option<&FormSpec>,
) -> Result<usize, OrbitError> {
    if s.ambient_dim() != l.ambient_dim() {
        return Err(OrbitError::DimensionMismatch {
            algebra: l.ambient_dim(),
            point: s.ambient_dim(),
        });
    }
    if let Some(f) = ambient_constraint {
        if !f.is_isotropic(s) {
            return Err(OrbitError::NotIsotropic);
        }
    }
    let map = quotient_map(s);
    let vs: Vec<Vector> = l
        .elements()
        .iter()
        .map(|x| ground_vec(&map(x), l.ground()))
        .collect();
    Ok(rank_of(&vs))
}

/// Stratum of a point of the model manifold.
pub fn classify_point(m: &StandardModel, point: &Point) -> Result<Stratum, OrbitError> {
    match (m.case(), point) {
        (ModelCase::Isotropic { n, .. }, Point::Subspace(s)) => {
            if s.ambient_dim() != 2 * n || s.dim() != n {
                return Err(OrbitError::NotOnManifold);
            }
            if !m.b().is_isotropic(s) {
                return Err(OrbitError::NotIsotropic);
            }
            let signature = m.h().restricted_signature(s)?;
            Ok(Stratum::Signature {
                signature,
                open: signature == m.open_orbit_signature()?,
            })
        }
        (ModelCase::Isotropic { .. }, Point::Line(_)) => Err(OrbitError::NotOnManifold),
        (_, Point::Line(z)) => {
            if z.len() != m.dim() {
                return Err(OrbitError::NotOnManifold);
            }
            if is_zero_vec(z) {
                return Err(OrbitError::ZeroVector);
            }
            if m.case() == ModelCase::Quadric7 && !m.b().norm(z).is_zero() {
                return Err(OrbitError::NotOnManifold);
            }
            Ok(match m.h().norm(z).sign().expect("h(z,z) is real") {
                1 => Stratum::Positive,
                -1 => Stratum::Negative,
                _ if is_real_line(z) => Stratum::NullReal,
                _ => Stratum::NullNonreal,
            })
        }
        (_, Point::Subspace(s)) if s.dim() == 1 => {
            classify_point(m, &Point::Line(s.basis().column(0)))
        }
        _ => Err(OrbitError::NotOnManifold),
    }
}

/// Tangent-dimension certificate of one algebra at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub point: String,
    pub algebra: String,
    pub ground: Ground,
    pub tangent_dim: usize,
    pub manifold_dim_complex: usize,
    pub manifold_dim_real: usize,
    pub open: bool,
    pub stratum: Stratum,
}

fn point_text(point: &Point) -> String {
    let vecs = match point {
        Point::Line(z) => vec![z.clone()],
        Point::Subspace(s) => s.basis_vectors(),
    };
    let parts: Vec<String> = vecs
        .iter()
        .map(|v| {
            let entries: Vec<String> = v.iter().map(Scalar::to_text).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("span{{{}}}", parts.join(", "))
}

pub fn orbit_report(
    m: &StandardModel,
    l: &LieAlgebraBasis,
    algebra: &str,
    point: &Point,
) -> Result<OrbitReport, OrbitError> {
    let stratum = classify_point(m, point)?;
    let tangent_dim = match point {
        Point::Line(z) => tangent_dim_projective(l, z)?,
        Point::Subspace(s) => tangent_dim_grassmann(l, s, Some(m.b()))?,
    };
    let dc = m.manifold_dim();
    let full = match l.ground() {
        Ground::Complex => dc,
        Ground::Real => 2 * dc,
    };
    Ok(OrbitReport {
        point: point_text(point),
        algebra: algebra.to_string(),
        ground: l.ground(),
        tangent_dim,
        manifold_dim_complex: dc,
        manifold_dim_real: 2 * dc,
        open: tangent_dim == full,
        stratum,
    })
}

/// One representative per stratum of the quadric: `z₊ = e₁+ie₂`,
/// `z₋ = e₄+ie₅`, the real point `e₃+e₄`, and `(e₁+e₄) + i(e₂+e₅)`.
pub fn quadric_representatives() -> Vec<(Stratum, Vector)> {
    let m = StandardModel::quadric7();
    let nonreal = vadd(
        &vadd(&unit(7, 0), &unit(7, 3)),
        &vscale(&Scalar::i(), &vadd(&unit(7, 1), &unit(7, 4))),
    );
    vec![
        (Stratum::Positive, m.z_plus()),
        (Stratum::Negative, m.z_minus()),
        (Stratum::NullReal, vadd(&unit(7, 2), &unit(7, 3))),
        (Stratum::NullNonreal, nonreal),
    ]
}

/// `X = u·(Gw)ᵗ − w·(Gu)ᵗ` for `G`-isotropic `u` with `G(u,w) = 0`; it lies
/// in `so(G)` and `X³ = 0`.
pub fn null_rotation(g: &Matrix, u: &[Scalar], w: &[Scalar]) -> Matrix {
    let gu = g.mul_vec(u);
    let gw = g.mul_vec(w);
    let n = u.len();
    Matrix::from_fn(n, n, |r, c| &(&u[r] * &gw[c]) - &(&w[r] * &gu[c]))
}

/// A pseudo-random element of `SO(3,4)`: a product of three exponentials of
/// null rotations with integer data in `[−bound, bound]`.
pub fn random_so34_element(rng: &mut impl Rng, bound: i64) -> Matrix {
    let g = crate::forms::e_pq(3, 4);
    let b = FormSpec::symmetric(g.clone()).expect("diagonal");
    let bound = bound.max(1);
    let mut out = Matrix::identity(7);
    for _ in 0..3 {
        let i = rng.random_range(0..3usize);
        let j = rng.random_range(3..7usize);
        let sgn = if rng.random_bool(0.5) { 1 } else { -1 };
        let u = vadd(&unit(7, i), &vscale(&Scalar::from_int(sgn), &unit(7, j)));
        let w: Vector = (0..7)
            .map(|_| Scalar::from_int(rng.random_range(-bound..=bound)))
            .collect();
        // make w orthogonal to u: b(u, e_i) = 1
        let c = b.value(&u, &w);
        let w = crate::linalg::vsub(&w, &vscale(&c, &unit(7, i)));
        let mut t = 0;
        while t == 0 {
            t = rng.random_range(-bound..=bound);
        }
        let x = null_rotation(&g, &u, &w);
        let e = nilpotent_exp(&x, &Scalar::from_int(t)).expect("null rotations are nilpotent");
        out = e.mul(&out);
    }
    out
}

/// The two real algebras compared on the quadric.
#[derive(Clone, Debug)]
pub struct QuadricAlgebras {
    pub g2: LieAlgebraBasis,
    pub so34: LieAlgebraBasis,
}

impl QuadricAlgebras {
    pub fn build() -> Result<QuadricAlgebras, OrbitError> {
        let d = octonions::derivations(&octonions::split_octonions())?;
        Ok(QuadricAlgebras {
            g2: octonions::imaginary_embedding(&d)?,
            so34: groups::so34().lie_algebra(),
        })
    }
}

/// Paired `(g₂, so(3,4))` reports at one sampled point.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitComparison {
    pub sample: usize,
    pub stratum: Stratum,
    pub g2: OrbitReport,
    pub so34: OrbitReport,
}

impl OrbitComparison {
    pub fn equal(&self) -> bool {
        self.g2.tangent_dim == self.so34.tangent_dim
    }
}

/// Samples `samples` points per quadric stratum by moving each
/// representative with [`random_so34_element`], and compares the real
/// tangent dimensions of split `g₂` and `so(3,4)` there.
pub fn verify_orbit_equality(
    algebras: &QuadricAlgebras,
    samples: usize,
    seed: u64,
    bound: i64,
) -> Result<Vec<OrbitComparison>, OrbitError> {
    let m = StandardModel::quadric7();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (stratum, rep) in quadric_representatives() {
        for _ in 0..samples {
            let g = random_so34_element(&mut rng, bound);
            let point = Point::Line(g.mul_vec(&rep));
            let sample = out.len();
            if classify_point(&m, &point)? != stratum {
                return Err(OrbitError::StratumDrift(sample));
            }
            out.push(OrbitComparison {
                sample,
                stratum,
                g2: orbit_report(&m, &algebras.g2, "g2split", &point)?,
                so34: orbit_report(&m, &algebras.so34, "so(3,4)", &point)?,
            });
        }
    }
    Ok(out)
}

/// `span{e_k + i·e_{n+k}}` as a [`Point`].
pub fn complex_normal_point(n: usize) -> Point {
    let vs: Vec<Vector> = (0..n).map(|k| pair_vector(2 * n, k, n + k)).collect();
    Point::Subspace(Subspace::span(2 * n, &vs))
}
