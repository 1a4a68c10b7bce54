//! Matrix groups defined by constraint lists, their exact membership tests,
//! solved Lie algebras, isotropy subalgebras, and the quotient comparison
//! for an inclusion of algebras acting on a common point.

use std::sync::Arc;

use thiserror::Error;

use crate::forms::{e_pq, FormError, FormKind, FormSpec, StandardModel};
use crate::linalg::{
    self, solve_linear_constraints, LieAlgebraBasis, LinearCondition, Matrix, Subspace, Vector,
};
use crate::octonions::{quadric_octonions, OctonionAlgebra};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("dimension mismatch: group acts on C^{expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("the smaller algebra is not contained in the larger one")]
    NotASubalgebra,
    #[error(transparent)]
    Form(#[from] FormError),
}

/// One defining condition of a matrix group.
#[derive(Clone, Debug)]
pub enum Constraint {
    /// `gᵗ·G·g = G`.
    PreservesBilinear(FormSpec),
    /// `gᵗ·G·conj(g) = G`, i.e. `h(gz, gw) = h(z, w)`.
    PreservesHermitian(FormSpec),
    DetOne,
    FixesVector(Vector),
    RealEntries,
    /// `diag(1, g)` is an automorphism of the algebra (index 0 = unit).
    PreservesProduct(Arc<OctonionAlgebra>),
}

impl Constraint {
    pub fn label(&self) -> &'static str {
        match self {
            Constraint::PreservesBilinear(_) => "preserves_bilinear",
            Constraint::PreservesHermitian(_) => "preserves_hermitian",
            Constraint::DetOne => "det_equals_1",
            Constraint::FixesVector(_) => "fixes_vector",
            Constraint::RealEntries => "real_entries",
            Constraint::PreservesProduct(_) => "preserves_product",
        }
    }

    pub fn holds(&self, g: &Matrix) -> bool {
        match self {
            Constraint::PreservesBilinear(f) => g.transpose().mul(f.gram()).mul(g) == *f.gram(),
            Constraint::PreservesHermitian(f) => {
                g.transpose().mul(f.gram()).mul(&g.conj()) == *f.gram()
            }
            Constraint::DetOne => g.det().is_one(),
            Constraint::FixesVector(v) => g.mul_vec(v) == *v,
            Constraint::RealEntries => g.is_real(),
            Constraint::PreservesProduct(a) => {
                let big = Matrix::block_diag(&Matrix::identity(1), g);
                linalg::is_zero_vec(&a.automorphism_residual(&big))
            }
        }
    }

    fn linearized(&self) -> LinearCondition {
        match self {
            Constraint::PreservesBilinear(f) => {
                LinearCondition::PreservesBilinear(f.gram().clone())
            }
            Constraint::PreservesHermitian(f) => {
                LinearCondition::PreservesHermitian(f.gram().clone())
            }
            Constraint::DetOne => LinearCondition::TraceZero,
            Constraint::FixesVector(v) => LinearCondition::Annihilates(v.clone()),
            Constraint::RealEntries => LinearCondition::RealEntries,
            Constraint::PreservesProduct(a) => {
                let a = a.clone();
                LinearCondition::Custom(Arc::new(move |x: &Matrix| {
                    let big = Matrix::block_diag(&Matrix::zeros(1, 1), x);
                    a.derivation_residual(&big)
                }))
            }
        }
    }
}

/// Parameters a group name is instantiated with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GroupParams {
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

#[derive(Clone, Debug)]
pub struct GroupSpec {
    name: String,
    params: GroupParams,
    ambient_dim: usize,
    constraints: Vec<Constraint>,
}

impl GroupSpec {
    pub fn new(
        name: &str,
        params: GroupParams,
        ambient_dim: usize,
        constraints: Vec<Constraint>,
    ) -> Self {
        assert!(
            !constraints.is_empty(),
            "a group needs at least one constraint"
        );
        GroupSpec {
            name: name.to_string(),
            params,
            ambient_dim,
            constraints,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    fn check_dim(&self, g: &Matrix) -> Result<(), GroupError> {
        if !g.is_square() || g.rows() != self.ambient_dim {
            return Err(GroupError::DimensionMismatch {
                expected: self.ambient_dim,
                found: g.rows().max(g.cols()),
            });
        }
        Ok(())
    }

    pub fn contains(&self, g: &Matrix) -> Result<bool, GroupError> {
        self.check_dim(g)?;
        Ok(self.constraints.iter().all(|c| c.holds(g)))
    }

    /// Labels of the constraints `g` violates.
    pub fn violations(&self, g: &Matrix) -> Result<Vec<&'static str>, GroupError> {
        self.check_dim(g)?;
        Ok(self
            .constraints
            .iter()
            .filter(|c| !c.holds(g))
            .map(Constraint::label)
            .collect())
    }

    /// True when the Lie algebra is taken over the reals.
    pub fn is_real_form(&self) -> bool {
        self.constraints.iter().any(|c| {
            matches!(
                c,
                Constraint::PreservesHermitian(_) | Constraint::RealEntries
            )
        })
    }

    pub fn lie_algebra(&self) -> LieAlgebraBasis {
        let conds: Vec<LinearCondition> = self.constraints.iter().map(|c| c.linearized()).collect();
        solve_linear_constraints(self.ambient_dim, &conds, self.is_real_form())
    }

    /// Rebuilds a group from its report name and parameters.
    pub fn by_name(name: &str, params: GroupParams) -> Result<GroupSpec, GroupError> {
        let GroupParams { n, p, q } = params;
        let g = match name {
            "Sp2nC" => sp2n_c(n)?,
            "SL2nC" => sl2n_c(n)?,
            "SU(n,n)" => su_nn(n)?,
            "Sp2nR" => sp2n_r(n)?,
            "Sp(2p,2q)" => sp_2p2q(p, q)?,
            "SU(2p,2q)" => su_2p2q(p, q)?,
            "SO7C" => so7_c(),
            "SO(3,4)" => so34(),
            "G2split" => g2_split(),
            "SO2nC" => so2n_c(n)?,
            "SO2n-1C" => so2n1_c(n)?,
            "SO(p,q)" => so_pq(p, q)?,
            other => return Err(GroupError::UnknownGroup(other.to_string())),
        };
        Ok(g)
    }
}

fn need_n(n: usize) -> Result<(), GroupError> {
    if n == 0 {
        return Err(FormError::InvalidParameters("n must be at least 1".into()).into());
    }
    Ok(())
}

/// `Sp₂ₙ(C)`: preserves `ω`.
pub fn sp2n_c(n: usize) -> Result<GroupSpec, GroupError> {
    let m = StandardModel::projective_split(n)?;
    Ok(GroupSpec::new(
        "Sp2nC",
        GroupParams { n, p: 0, q: 0 },
        2 * n,
        vec![Constraint::PreservesBilinear(m.omega().unwrap().clone())],
    ))
}

pub fn sl2n_c(n: usize) -> Result<GroupSpec, GroupError> {
    need_n(n)?;
    Ok(GroupSpec::new(
        "SL2nC",
        GroupParams { n, p: 0, q: 0 },
        2 * n,
        vec![Constraint::DetOne],
    ))
}

/// `SU(n,n)`: preserves `h` with `E = Id ⊕ −Id`, determinant one.
pub fn su_nn(n: usize) -> Result<GroupSpec, GroupError> {
    let m = StandardModel::projective_split(n)?;
    Ok(GroupSpec::new(
        "SU(n,n)",
        GroupParams { n, p: 0, q: 0 },
        2 * n,
        vec![
            Constraint::PreservesHermitian(m.h().clone()),
            Constraint::DetOne,
        ],
    ))
}

/// `Sp₂ₙ(R)` as `SU(n,n) ∩ Sp₂ₙ(C)`: preserves `ω` and `h`.
pub fn sp2n_r(n: usize) -> Result<GroupSpec, GroupError> {
    let m = StandardModel::projective_split(n)?;
    Ok(GroupSpec::new(
        "Sp2nR",
        GroupParams { n, p: 0, q: 0 },
        2 * n,
        vec![
            Constraint::PreservesBilinear(m.omega().unwrap().clone()),
            Constraint::PreservesHermitian(m.h().clone()),
        ],
    ))
}

/// `Sp(2p,2q)`: preserves `ω` and `h` with `E = E_{p,q} ⊕ E_{p,q}`.
pub fn sp_2p2q(p: usize, q: usize) -> Result<GroupSpec, GroupError> {
    let m = StandardModel::projective_pq(p, q)?;
    Ok(GroupSpec::new(
        "Sp(2p,2q)",
        GroupParams { n: p + q, p, q },
        2 * (p + q),
        vec![
            Constraint::PreservesBilinear(m.omega().unwrap().clone()),
            Constraint::PreservesHermitian(m.h().clone()),
        ],
    ))
}

pub fn su_2p2q(p: usize, q: usize) -> Result<GroupSpec, GroupError> {
    let m = StandardModel::projective_pq(p, q)?;
    Ok(GroupSpec::new(
        "SU(2p,2q)",
        GroupParams { n: p + q, p, q },
        2 * (p + q),
        vec![
            Constraint::PreservesHermitian(m.h().clone()),
            Constraint::DetOne,
        ],
    ))
}

/// `SO₇(C)` of the quadric form `diag(1,1,1,−1,−1,−1,−1)`.
pub fn so7_c() -> GroupSpec {
    let m = StandardModel::quadric7();
    GroupSpec::new(
        "SO7C",
        GroupParams::default(),
        7,
        vec![
            Constraint::PreservesBilinear(m.b().clone()),
            Constraint::DetOne,
        ],
    )
}

/// `SO(3,4)`: preserves the quadric `b` and `h` (both of the same real
/// Gram matrix, which forces real entries).
pub fn so34() -> GroupSpec {
    let m = StandardModel::quadric7();
    GroupSpec::new(
        "SO(3,4)",
        GroupParams::default(),
        7,
        vec![
            Constraint::PreservesBilinear(m.b().clone()),
            Constraint::PreservesHermitian(m.h().clone()),
            Constraint::DetOne,
        ],
    )
}

/// Automorphisms of the split octonions acting on the imaginary part in
/// quadric coordinates.
pub fn g2_split() -> GroupSpec {
    let m = StandardModel::quadric7();
    GroupSpec::new(
        "G2split",
        GroupParams::default(),
        7,
        vec![
            Constraint::PreservesProduct(quadric_octonions()),
            Constraint::PreservesBilinear(m.b().clone()),
            Constraint::DetOne,
            Constraint::RealEntries,
        ],
    )
}

/// `SO_m(C)` of `zᵗw`.
pub fn so_c(m: usize) -> GroupSpec {
    GroupSpec::new(
        "SO2nC",
        GroupParams {
            n: m / 2,
            p: 0,
            q: 0,
        },
        m,
        vec![
            Constraint::PreservesBilinear(FormSpec::standard(m)),
            Constraint::DetOne,
        ],
    )
}

pub fn so2n_c(n: usize) -> Result<GroupSpec, GroupError> {
    need_n(n)?;
    Ok(so_c(2 * n))
}

/// `SO₂ₙ₋₁(C)` as the stabilizer of `e₂ₙ` in `SO₂ₙ(C)`.
pub fn so2n1_c(n: usize) -> Result<GroupSpec, GroupError> {
    need_n(n)?;
    Ok(GroupSpec::new(
        "SO2n-1C",
        GroupParams { n, p: 0, q: 0 },
        2 * n,
        vec![
            Constraint::PreservesBilinear(FormSpec::standard(2 * n)),
            Constraint::DetOne,
            Constraint::FixesVector(linalg::unit(2 * n, 2 * n - 1)),
        ],
    ))
}

/// `SO(p,q) = Fix(e₂ₙ)` in the real form preserving `ĥ`, in the model
/// coordinates where `b(z,w) = zᵗw`.
pub fn so_pq(p: usize, q: usize) -> Result<GroupSpec, GroupError> {
    if (p + q).is_multiple_of(2) {
        return Err(FormError::InvalidParameters("p + q must be odd".into()).into());
    }
    let n = (p + q).div_ceil(2);
    let m = StandardModel::isotropic(n, p, q)?;
    Ok(GroupSpec::new(
        "SO(p,q)",
        GroupParams { n, p, q },
        2 * n,
        vec![
            Constraint::PreservesBilinear(m.b().clone()),
            Constraint::PreservesHermitian(m.h().clone()),
            Constraint::DetOne,
            Constraint::FixesVector(m.fixed_vector()),
        ],
    ))
}

/// The same group in signature coordinates: real matrices preserving
/// `Ê = E_{p,q} ⊕ (±1)` and fixing `e₂ₙ`.
pub fn so_pq_signature(p: usize, q: usize) -> Result<GroupSpec, GroupError> {
    let model_group = so_pq(p, q)?;
    let n = model_group.params.n;
    let m = StandardModel::isotropic(n, p, q)?;
    Ok(GroupSpec::new(
        "SO(p,q)",
        model_group.params,
        2 * n,
        vec![
            Constraint::PreservesBilinear(FormSpec::symmetric(m.signature_gram()?)?),
            Constraint::RealEntries,
            Constraint::DetOne,
            Constraint::FixesVector(m.fixed_vector()),
        ],
    ))
}

/// `SO(p,q)` on `R^{p+q}` with Gram `E_{p,q}`.
pub fn so_real(p: usize, q: usize) -> GroupSpec {
    GroupSpec::new(
        "SO(p,q)",
        GroupParams { n: 0, p, q },
        p + q,
        vec![
            Constraint::PreservesBilinear(FormSpec::symmetric(e_pq(p, q)).expect("diagonal")),
            Constraint::RealEntries,
            Constraint::DetOne,
        ],
    )
}

/// The point a parabolic subalgebra stabilizes.
#[derive(Clone, Debug)]
pub enum Point {
    Line(Vector),
    Subspace(Subspace),
}

impl Point {
    pub fn as_subspace(&self) -> Subspace {
        match self {
            Point::Line(z) => Subspace::span(z.len(), std::slice::from_ref(z)),
            Point::Subspace(s) => s.clone(),
        }
    }
}

/// `A·X·B` flattened, where `B` spans `S` and `A` spans its annihilator: it
/// vanishes iff `X·S ⊆ S`.
pub(crate) fn quotient_map(s: &Subspace) -> impl Fn(&Matrix) -> Vector {
    let a = s.annihilator();
    let b = s.basis().clone();
    move |x: &Matrix| a.mul(x).mul(&b).entries().to_vec()
}

/// `{X ∈ span(L) : X·S ⊆ S}`.
pub fn isotropy_subalgebra(l: &LieAlgebraBasis, point: &Point) -> LieAlgebraBasis {
    l.solve_in_span(quotient_map(&point.as_subspace()))
}

/// Quotient dimensions of an inclusion `g ⊆ ĝ` at a common point.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct OnishchikReport {
    pub dim_small: usize,
    pub dim_big: usize,
    pub isotropy_small: usize,
    pub isotropy_big: usize,
    pub quotient_small: usize,
    pub quotient_big: usize,
    pub quotients_equal: bool,
    /// `q = q̂ ∩ g`.
    pub isotropy_is_intersection: bool,
}

impl OnishchikReport {
    pub fn passed(&self) -> bool {
        self.quotients_equal && self.isotropy_is_intersection
    }
}

pub fn check_onishchik_triple(
    g_small: &LieAlgebraBasis,
    g_big: &LieAlgebraBasis,
    point: &Point,
) -> Result<OnishchikReport, GroupError> {
    if g_small.ground() != g_big.ground() || !g_big.contains_algebra(g_small) {
        return Err(GroupError::NotASubalgebra);
    }
    let q = isotropy_subalgebra(g_small, point);
    let q_hat = isotropy_subalgebra(g_big, point);
    let meet = q_hat.intersection_dim(g_small);
    Ok(OnishchikReport {
        dim_small: g_small.dim(),
        dim_big: g_big.dim(),
        isotropy_small: q.dim(),
        isotropy_big: q_hat.dim(),
        quotient_small: g_small.dim() - q.dim(),
        quotient_big: g_big.dim() - q_hat.dim(),
        quotients_equal: g_small.dim() - q.dim() == g_big.dim() - q_hat.dim(),
        isotropy_is_intersection: meet == q.dim() && q_hat.contains_algebra(&q),
    })
}

/// `exp(t·X)` as a finite sum when `X` is nilpotent.
pub fn nilpotent_exp(x: &Matrix, t: &Scalar) -> Option<Matrix> {
    let n = x.rows();
    let mut out = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=n {
        term = term.mul(x).scale(&(t / &Scalar::from_int(k as i64)));
        if term.is_zero() {
            return Some(out);
        }
        out = out.add(&term);
    }
    None
}

/// Kind of a symmetric or Hermitian form constraint, for reports.
pub fn form_kind(c: &Constraint) -> Option<FormKind> {
    match c {
        Constraint::PreservesBilinear(f) | Constraint::PreservesHermitian(f) => Some(f.kind()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ground;

    #[test]
    fn membership_examples() {
        let d = Matrix::diag(&[Scalar::from_int(2), Scalar::from_ratio(1, 2)]);
        assert!(sp2n_c(1).unwrap().contains(&d).unwrap());
        assert!(!su_nn(1).unwrap().contains(&d).unwrap());
        for g in [
            sp2n_c(2).unwrap(),
            su_nn(2).unwrap(),
            so34(),
            g2_split(),
            so_pq(2, 3).unwrap(),
            so_pq_signature(2, 3).unwrap(),
        ] {
            let id = Matrix::identity(g.ambient_dim());
            assert!(g.contains(&id).unwrap(), "{}", g.name());
        }
        assert!(sl2n_c(1).unwrap().contains(&Matrix::identity(3)).is_err());
    }

    #[test]
    fn lie_algebra_dimensions() {
        assert_eq!(sp2n_c(2).unwrap().lie_algebra().dim(), 10);
        assert_eq!(so7_c().lie_algebra().dim(), 21);
        let su11 = su_nn(1).unwrap().lie_algebra();
        assert_eq!(su11.ground(), Ground::Real);
        assert_eq!(su11.dim(), 3);
        assert!(su11.is_bracket_closed());
        assert_eq!(sp2n_r(2).unwrap().lie_algebra().dim(), 10);
        assert_eq!(so34().lie_algebra().dim(), 21);
        assert_eq!(g2_split().lie_algebra().dim(), 14);
        assert_eq!(so_pq(2, 1).unwrap().lie_algebra().dim(), 3);
    }

    #[test]
    fn isotropy_examples() {
        let gl = solve_linear_constraints(3, &[], false);
        let q = isotropy_subalgebra(&gl, &Point::Line(linalg::unit(3, 0)));
        assert_eq!(gl.dim() - q.dim(), 2);
        assert!(q.is_bracket_closed());
    }

    #[test]
    fn onishchik_projective() {
        for n in 1..=2 {
            let small = sp2n_c(n).unwrap().lie_algebra();
            let big = sl2n_c(n).unwrap().lie_algebra();
            let z = linalg::int_vector(&(0..2 * n as i64).map(|k| k + 1).collect::<Vec<_>>());
            let r = check_onishchik_triple(&small, &big, &Point::Line(z)).unwrap();
            assert_eq!(r.quotient_small, 2 * n - 1);
            assert!(r.passed());
        }
        let err = check_onishchik_triple(
            &sl2n_c(1).unwrap().lie_algebra(),
            &sp2n_c(1).unwrap().lie_algebra(),
            &Point::Line(linalg::unit(2, 0)),
        );
        // sl₂ = sp₂, so the inclusion holds both ways in rank one
        assert!(err.is_ok());
        let err = check_onishchik_triple(
            &sl2n_c(2).unwrap().lie_algebra(),
            &sp2n_c(2).unwrap().lie_algebra(),
            &Point::Line(linalg::unit(4, 0)),
        );
        assert_eq!(err, Err(GroupError::NotASubalgebra));
    }

    #[test]
    fn nilpotent_exponential_stays_in_group() {
        let sp = sp2n_c(2).unwrap();
        for x in sp.lie_algebra().elements() {
            if let Some(g) = nilpotent_exp(x, &Scalar::from_ratio(3, 2)) {
                assert!(sp.contains(&g).unwrap());
            }
        }
        assert!(nilpotent_exp(&Matrix::identity(2), &Scalar::one()).is_none());
    }

    #[test]
    fn unknown_group_name() {
        assert!(matches!(
            GroupSpec::by_name("E8", GroupParams::default()),
            Err(GroupError::UnknownGroup(_))
        ));
        assert_eq!(
            GroupSpec::by_name("SO(p,q)", GroupParams { n: 3, p: 3, q: 2 })
                .unwrap()
                .ambient_dim(),
            6
        );
    }
}
