//! Gram-matrix presentations of the bilinear, symplectic and Hermitian
//! forms of the three model geometries, together with the structure maps
//! `J`, `E`, `φ` and subspace predicates (perp, restriction, isotropy).

use thiserror::Error;

use crate::linalg::{
    self, is_zero_vec, unit, vconj, LinalgError, Matrix, Pairing, Signature, Subspace, Vector,
};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Gram matrix does not have the declared symmetry")]
    WrongSymmetry,
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("operation needs a {0} model")]
    WrongModelCase(&'static str),
    #[error("invalid model parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Symmetric,
    Antisymmetric,
    Hermitian,
}

/// A nondegenerate form given by its Gram matrix: `zᵗ·G·w` for the
/// bilinear kinds, `zᵗ·G·conj(w)` for the Hermitian kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpec {
    kind: FormKind,
    gram: Matrix,
}

impl FormSpec {
    pub fn new(kind: FormKind, gram: Matrix) -> Result<Self, FormError> {
        if !gram.is_square() {
            return Err(FormError::WrongSymmetry);
        }
        let ok = match kind {
            FormKind::Symmetric => gram.transpose() == gram,
            FormKind::Antisymmetric => gram.transpose() == gram.neg(),
            FormKind::Hermitian => linalg::is_hermitian(&gram),
        };
        if !ok {
            return Err(FormError::WrongSymmetry);
        }
        if gram.rank() < gram.rows() {
            return Err(FormError::Degenerate);
        }
        Ok(FormSpec { kind, gram })
    }

    pub fn symmetric(gram: Matrix) -> Result<Self, FormError> {
        FormSpec::new(FormKind::Symmetric, gram)
    }

    pub fn antisymmetric(gram: Matrix) -> Result<Self, FormError> {
        FormSpec::new(FormKind::Antisymmetric, gram)
    }

    pub fn hermitian(gram: Matrix) -> Result<Self, FormError> {
        FormSpec::new(FormKind::Hermitian, gram)
    }

    /// The standard form `zᵗw` on `C^n`.
    pub fn standard(n: usize) -> Self {
        FormSpec {
            kind: FormKind::Symmetric,
            gram: Matrix::identity(n),
        }
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn pairing(&self) -> Pairing {
        match self.kind {
            FormKind::Hermitian => Pairing::Sesquilinear,
            _ => Pairing::Bilinear,
        }
    }

    fn check(&self, v: &[Scalar]) -> Result<(), FormError> {
        if v.len() != self.dim() {
            return Err(FormError::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, z: &[Scalar], w: &[Scalar]) -> Result<Scalar, FormError> {
        self.check(z)?;
        self.check(w)?;
        Ok(self.value(z, w))
    }

    /// [`FormSpec::evaluate`] for callers that already know the dimensions.
    pub fn value(&self, z: &[Scalar], w: &[Scalar]) -> Scalar {
        let w = match self.kind {
            FormKind::Hermitian => vconj(w),
            _ => w.to_vec(),
        };
        let gw = self.gram.mul_vec(&w);
        z.iter()
            .zip(&gw)
            .fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
    }

    pub fn norm(&self, z: &[Scalar]) -> Scalar {
        self.value(z, z)
    }

    /// `{v : f(s, v) = 0 for all s ∈ S}` (second-slot perp).
    pub fn perp(&self, s: &Subspace) -> Subspace {
        if s.dim() == 0 {
            return Subspace::full(self.dim());
        }
        let rows = s.basis().transpose().mul(&self.gram);
        match self.kind {
            // sᵗ·G·conj(v) = 0  ⇔  conj(sᵗ·G)·v = 0
            FormKind::Hermitian => rows.conj().kernel(),
            _ => rows.kernel(),
        }
    }

    /// Gram matrix of the form on the basis of `S`.
    pub fn restrict_gram(&self, s: &Subspace) -> Matrix {
        let b = s.basis();
        let right = match self.kind {
            FormKind::Hermitian => b.conj(),
            _ => b.clone(),
        };
        b.transpose().mul(&self.gram).mul(&right)
    }

    pub fn is_isotropic(&self, s: &Subspace) -> bool {
        self.restrict_gram(s).is_zero()
    }

    /// Inertia of a Hermitian form restricted to `S`.
    pub fn restricted_signature(&self, s: &Subspace) -> Result<Signature, FormError> {
        if self.kind != FormKind::Hermitian {
            return Err(FormError::WrongSymmetry);
        }
        Ok(linalg::hermitian_signature(&self.restrict_gram(s))?)
    }
}

/// `E_{p,q} = diag(+1 ×p, −1 ×q)`.
pub fn e_pq(p: usize, q: usize) -> Matrix {
    let d: Vec<i64> = std::iter::repeat_n(1, p)
        .chain(std::iter::repeat_n(-1, q))
        .collect();
    Matrix::diag_int(&d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectiveVariant {
    /// `SU(n,n) ⊃ Sp₂ₙ(R)`, with `E = Id_n ⊕ −Id_n`.
    Split,
    /// `SU(2p,2q) ⊃ Sp(2p,2q)`, with `E = E_{p,q} ⊕ E_{p,q}`.
    Signature { p: usize, q: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelCase {
    Projective {
        n: usize,
        variant: ProjectiveVariant,
    },
    Quadric7,
    Isotropic {
        n: usize,
        p: usize,
        q: usize,
    },
}

impl ModelCase {
    /// CLI case name.
    pub fn name(&self) -> &'static str {
        match self {
            ModelCase::Projective {
                variant: ProjectiveVariant::Split,
                ..
            } => "projective-split",
            ModelCase::Projective { .. } => "projective-pq",
            ModelCase::Quadric7 => "quadric7",
            ModelCase::Isotropic { .. } => "isotropic",
        }
    }
}

/// One of the three model geometries with its forms and structure maps.
#[derive(Clone, Debug)]
pub struct StandardModel {
    case: ModelCase,
    dim: usize,
    j: Option<Matrix>,
    e: Matrix,
    b: FormSpec,
    omega: Option<FormSpec>,
    h: FormSpec,
    h_v: Option<FormSpec>,
}

impl StandardModel {
    fn projective(n: usize, variant: ProjectiveVariant) -> Result<Self, FormError> {
        if n == 0 {
            return Err(FormError::InvalidParameters("n must be at least 1".into()));
        }
        let dim = 2 * n;
        // J e_i = e_{n+i} for i ≤ n, J e_i = −e_{i−n} for i > n
        let j = Matrix::from_fn(dim, dim, |r, c| {
            if c < n && r == c + n {
                Scalar::one()
            } else if c >= n && r + n == c {
                Scalar::from_int(-1)
            } else {
                Scalar::zero()
            }
        });
        let e = match variant {
            ProjectiveVariant::Split => e_pq(n, n),
            ProjectiveVariant::Signature { p, q } => {
                if p + q != n {
                    return Err(FormError::InvalidParameters(format!(
                        "projective-pq needs p + q = n, got p={p}, q={q}, n={n}"
                    )));
                }
                Matrix::block_diag(&e_pq(p, q), &e_pq(p, q))
            }
        };
        Ok(StandardModel {
            case: ModelCase::Projective { n, variant },
            dim,
            omega: Some(FormSpec::antisymmetric(j.clone())?),
            h: FormSpec::hermitian(e.clone())?,
            j: Some(j),
            e,
            b: FormSpec::standard(dim),
            h_v: None,
        })
    }

    /// `P(C²ⁿ)` with `Sp₂ₙ(R) ⊂ SU(n,n)`.
    pub fn projective_split(n: usize) -> Result<Self, FormError> {
        StandardModel::projective(n, ProjectiveVariant::Split)
    }

    /// `P(C^{2(p+q)})` with `Sp(2p,2q) ⊂ SU(2p,2q)`.
    pub fn projective_pq(p: usize, q: usize) -> Result<Self, FormError> {
        StandardModel::projective(p + q, ProjectiveVariant::Signature { p, q })
    }

    /// The quadric of `b` in `P(C⁷)`, with `b` and `h` both of Gram
    /// `diag(1,1,1,−1,−1,−1,−1)`.
    pub fn quadric7() -> Self {
        let g = e_pq(3, 4);
        StandardModel {
            case: ModelCase::Quadric7,
            dim: 7,
            j: None,
            e: g.clone(),
            b: FormSpec::symmetric(g.clone()).expect("diagonal"),
            omega: None,
            h: FormSpec::hermitian(g).expect("diagonal"),
            h_v: None,
        }
    }

    /// Isotropic `n`-planes of `zᵗw` on `C²ⁿ`; `h = E_{p,q}` on
    /// `V = span{e₁,…,e₂ₙ₋₁}` is extended to `ĥ` by `ĥ(e₂ₙ) = −1` for
    /// even `p` and `+1` for odd `p`, with `e₂ₙ ⊥ V`.
    pub fn isotropic(n: usize, p: usize, q: usize) -> Result<Self, FormError> {
        if n < 1 || p + q != 2 * n - 1 {
            return Err(FormError::InvalidParameters(format!(
                "isotropic needs n ≥ 1 and p + q = 2n − 1, got n={n}, p={p}, q={q}"
            )));
        }
        let dim = 2 * n;
        let e = e_pq(p, q);
        let eps = if p.is_multiple_of(2) { -1 } else { 1 };
        let h_hat = Matrix::block_diag(&e, &Matrix::diag_int(&[eps]));
        Ok(StandardModel {
            case: ModelCase::Isotropic { n, p, q },
            dim,
            j: None,
            h_v: Some(FormSpec::hermitian(e.clone())?),
            e,
            b: FormSpec::standard(dim),
            omega: None,
            h: FormSpec::hermitian(h_hat)?,
        })
    }

    /// Builds a model from its CLI case name.
    pub fn from_case(case: &str, n: usize, p: usize, q: usize) -> Result<Self, FormError> {
        match case {
            "projective-split" => StandardModel::projective_split(n),
            "projective-pq" => {
                if p + q != n {
                    return Err(FormError::InvalidParameters(format!(
                        "projective-pq needs p + q = n, got p={p}, q={q}, n={n}"
                    )));
                }
                StandardModel::projective_pq(p, q)
            }
            "quadric7" => Ok(StandardModel::quadric7()),
            "isotropic" => StandardModel::isotropic(n, p, q),
            other => Err(FormError::InvalidParameters(format!(
                "unknown case {other:?}"
            ))),
        }
    }

    pub fn case(&self) -> ModelCase {
        self.case
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `n` for the projective and isotropic cases.
    pub fn n(&self) -> usize {
        match self.case {
            ModelCase::Projective { n, .. } | ModelCase::Isotropic { n, .. } => n,
            ModelCase::Quadric7 => 0,
        }
    }

    pub fn j(&self) -> Option<&Matrix> {
        self.j.as_ref()
    }

    pub fn e(&self) -> &Matrix {
        &self.e
    }

    pub fn b(&self) -> &FormSpec {
        &self.b
    }

    pub fn omega(&self) -> Option<&FormSpec> {
        self.omega.as_ref()
    }

    /// `h` on the whole ambient space (`ĥ` in the isotropic case).
    pub fn h(&self) -> &FormSpec {
        &self.h
    }

    /// `h` on `V = span{e₁,…,e₂ₙ₋₁}` in the isotropic case.
    pub fn h_v(&self) -> Option<&FormSpec> {
        self.h_v.as_ref()
    }

    /// Complex dimension of the flag manifold `Z`.
    pub fn manifold_dim(&self) -> usize {
        match self.case {
            ModelCase::Projective { n, .. } => 2 * n - 1,
            ModelCase::Quadric7 => 5,
            ModelCase::Isotropic { n, .. } => n * (n - 1) / 2,
        }
    }

    /// `φ(z) = −J·E·conj(z)`.
    pub fn phi(&self, z: &[Scalar]) -> Result<Vector, FormError> {
        let j = self
            .j
            .as_ref()
            .ok_or(FormError::WrongModelCase("projective"))?;
        if z.len() != self.dim {
            return Err(FormError::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            });
        }
        Ok(j.mul(&self.e).neg().mul_vec(&vconj(z)))
    }

    /// `z₊ = e₁ + i·e₂`.
    pub fn z_plus(&self) -> Vector {
        let mut v = unit(self.dim, 0);
        v[1] = Scalar::i();
        v
    }

    /// `z₋ = e₄ + i·e₅` (quadric).
    pub fn z_minus(&self) -> Vector {
        let mut v = unit(self.dim, 3);
        v[4] = Scalar::i();
        v
    }

    /// `e₂ₙ`, the vector fixed by `SO₂ₙ₋₁(C)` (isotropic case).
    pub fn fixed_vector(&self) -> Vector {
        unit(self.dim, self.dim - 1)
    }

    fn isotropic_params(&self) -> Result<(usize, usize, usize), FormError> {
        match self.case {
            ModelCase::Isotropic { n, p, q } => Ok((n, p, q)),
            _ => Err(FormError::WrongModelCase("isotropic")),
        }
    }

    /// `ĥ(e₂ₙ, e₂ₙ) ∈ {±1}`.
    pub fn extension_sign(&self) -> Result<i64, FormError> {
        let (_, p, _) = self.isotropic_params()?;
        Ok(if p % 2 == 0 { -1 } else { 1 })
    }

    /// Normal form of the complex case: `span{e_k + i·e_{n+k} : k = 1..n}`.
    pub fn normal_form_complex(&self) -> Result<Subspace, FormError> {
        let (n, _, _) = self.isotropic_params()?;
        let vs: Vec<Vector> = (0..n).map(|k| pair_vector(self.dim, k, n + k)).collect();
        Ok(Subspace::span(self.dim, &vs))
    }

    /// Coordinate pairs `(a, b)` of the real normal form `Ŵ₀`, each
    /// contributing `e_a + i·e_b` (0-based). For even `p`: the positive pairs
    /// `(1,2),…,(p−1,p)`, the negative pairs `(p+1,p+2),…,(2n−3,2n−2)`, and
    /// `(2n−1, 2n)`. For odd `p` the leftover coordinate of `V` is the last
    /// positive one, `e_p`, paired with `e₂ₙ`.
    pub fn real_normal_form_pairs(&self) -> Result<RealNormalForm, FormError> {
        let (n, p, q) = self.isotropic_params()?;
        let last = 2 * n - 1;
        let (positive, negative, leftover) = if p % 2 == 0 {
            let pos = (0..p / 2).map(|k| (2 * k, 2 * k + 1)).collect();
            let neg = (0..(q - 1) / 2)
                .map(|k| (p + 2 * k, p + 2 * k + 1))
                .collect();
            (pos, neg, 2 * n - 2)
        } else {
            let pos = (0..(p - 1) / 2).map(|k| (2 * k, 2 * k + 1)).collect();
            let neg = (0..q / 2).map(|k| (p + 2 * k, p + 2 * k + 1)).collect();
            (pos, neg, p - 1)
        };
        Ok(RealNormalForm {
            positive,
            negative,
            leftover,
            last,
        })
    }

    /// `Ŵ₀ = W₀ ⊕ C(e_leftover + i·e₂ₙ)`, in model coordinates.
    pub fn normal_form_real(&self) -> Result<Subspace, FormError> {
        let nf = self.real_normal_form_pairs()?;
        let vs: Vec<Vector> = nf
            .all_pairs()
            .into_iter()
            .map(|(a, b)| pair_vector(self.dim, a, b))
            .collect();
        Ok(Subspace::span(self.dim, &vs))
    }

    /// Permutation `π` with `π(e_{2k−1} + i·e_{2k}) = e_k + i·e_{n+k}`; it
    /// carries the consecutive-pair basis of the real normal form (even `p`)
    /// onto the basis of the complex normal form. Orthogonal for `zᵗw`.
    pub fn normal_form_change_of_basis(&self) -> Result<Matrix, FormError> {
        let (n, _, _) = self.isotropic_params()?;
        let mut m = Matrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            m.set(k, 2 * k, Scalar::one());
            m.set(n + k, 2 * k + 1, Scalar::one());
        }
        Ok(m)
    }

    /// Diagonal `D` with `x = D·y` from signature coordinates `y` (where `b`
    /// has Gram `Ê = E_{p,q} ⊕ (±1)` and `SO(p,q)` is real) to model
    /// coordinates `x` (where `b(x,x) = xᵗx`). `D = diag(1 ×p, i ×q, c)` with
    /// `c² = ĥ(e₂ₙ, e₂ₙ)`.
    pub fn signature_change(&self) -> Result<Matrix, FormError> {
        let (_, p, q) = self.isotropic_params()?;
        let eps = self.extension_sign()?;
        let mut d: Vec<Scalar> = std::iter::repeat_n(Scalar::one(), p)
            .chain(std::iter::repeat_n(Scalar::i(), q))
            .collect();
        d.push(if eps == 1 { Scalar::one() } else { Scalar::i() });
        Ok(Matrix::diag(&d))
    }

    /// `Ê = E_{p,q} ⊕ (±1)`: Gram of both `b` and `ĥ` in signature coordinates.
    pub fn signature_gram(&self) -> Result<Matrix, FormError> {
        Ok(self.h.gram().clone())
    }

    /// Signature of `ĥ` on the planes of the open orbit:
    /// `(p/2, (q+1)/2)` for even `p`, `((p+1)/2, q/2)` for odd `p`.
    pub fn open_orbit_signature(&self) -> Result<Signature, FormError> {
        let (_, p, q) = self.isotropic_params()?;
        Ok(if p % 2 == 0 {
            Signature::new(p / 2, q.div_ceil(2), 0)
        } else {
            Signature::new(p.div_ceil(2), q / 2, 0)
        })
    }

    /// `V = span{e₁,…,e₂ₙ₋₁}`.
    pub fn v_subspace(&self) -> Subspace {
        let vs: Vec<Vector> = (0..self.dim - 1).map(|k| unit(self.dim, k)).collect();
        Subspace::span(self.dim, &vs)
    }
}

/// Layout of the real normal form, see [`StandardModel::real_normal_form_pairs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealNormalForm {
    pub positive: Vec<(usize, usize)>,
    pub negative: Vec<(usize, usize)>,
    pub leftover: usize,
    pub last: usize,
}

impl RealNormalForm {
    pub fn all_pairs(&self) -> Vec<(usize, usize)> {
        let mut v = self.positive.clone();
        v.extend(&self.negative);
        v.push((self.leftover, self.last));
        v
    }
}

/// `e_a + i·e_b`.
pub fn pair_vector(n: usize, a: usize, b: usize) -> Vector {
    let mut v = unit(n, a);
    v[b] = Scalar::i();
    v
}

/// True iff the line spanned by `z` equals its conjugate line.
pub fn is_real_line(z: &[Scalar]) -> bool {
    if is_zero_vec(z) {
        return false;
    }
    let l = Subspace::span(z.len(), &[z.to_vec()]);
    l.column_space_equal(&l.conj()).unwrap_or(false)
}
