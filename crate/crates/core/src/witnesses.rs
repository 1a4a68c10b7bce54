//! Explicit group elements certifying transitivity: reflections, Witt
//! transport of frames, the plane-by-plane transport of `h`-definite lines
//! under `Sp₂ₙ(R)` and `Sp(2p,2q)`, and the normal-form reductions for
//! isotropic `n`-planes under `SO₂ₙ₋₁(C)` and `SO(p,q)`.
//!
//! A [`Witness`] carries its group, element and claim; [`Witness::reverify`]
//! rechecks membership and claim from the matrices alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::forms::{FormError, FormKind, FormSpec, ModelCase, ProjectiveVariant, StandardModel};
use crate::groups::{self, GroupError, GroupParams, GroupSpec};
use crate::linalg::{
    self, common_tower, is_zero_vec, unit, vadd, vscale, vsub, LinalgError, Matrix, Pairing,
    Signature, Subspace, Vector,
};
use crate::scalar::{Scalar, ScalarError, Tower};
use crate::serial;

pub const WITNESS_SCHEMA: &str = "flagcert.witness/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("reflection vector is isotropic")]
    IsotropicVector,
    #[error("frames have different Gram matrices")]
    GramMismatch,
    #[error("frames are linearly dependent")]
    DependentFrame,
    #[error("no anisotropic vector orthogonal to the target frame for the determinant correction")]
    NoRoomForDeterminant,
    #[error("the line is h-null")]
    NullLine,
    #[error("the lines have opposite h-signs")]
    SignMismatch,
    #[error("the subspace is not b-isotropic")]
    NotIsotropic,
    #[error("wrong dimension: expected {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("the plane lies in V = span(e1..e(2n-1)), outside the algorithm's domain")]
    InsideV,
    #[error("W = Ŵ ∩ V is degenerate for h")]
    Degenerate,
    #[error("the plane has h-signature {0}, not the open-orbit signature")]
    NotOpenOrbit(Signature),
    #[error("the plane lies in the other family of maximal isotropic subspaces")]
    OppositeComponent,
    #[error("operation needs a {0} model")]
    WrongModel(&'static str),
    #[error("witness parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// What a witness element is claimed to do.
#[derive(Clone, Debug)]
pub enum Claim {
    MapsLine { from: Vector, to: Vector },
    MapsSubspace { from: Subspace, to: Subspace },
    MapsVector { from: Vector, to: Vector },
}

impl Claim {
    pub fn kind(&self) -> &'static str {
        match self {
            Claim::MapsLine { .. } => "maps_line",
            Claim::MapsSubspace { .. } => "maps_subspace",
            Claim::MapsVector { .. } => "maps_vector",
        }
    }

    fn ends(&self) -> (Vec<Vector>, Vec<Vector>) {
        match self {
            Claim::MapsLine { from, to } | Claim::MapsVector { from, to } => {
                (vec![from.clone()], vec![to.clone()])
            }
            Claim::MapsSubspace { from, to } => (from.basis_vectors(), to.basis_vectors()),
        }
    }

    fn ambient_dim(&self) -> usize {
        match self {
            Claim::MapsLine { from, .. } | Claim::MapsVector { from, .. } => from.len(),
            Claim::MapsSubspace { from, .. } => from.ambient_dim(),
        }
    }

    pub fn holds(&self, g: &Matrix) -> bool {
        let n = g.rows();
        match self {
            Claim::MapsLine { from, to } => {
                if from.len() != n || to.len() != n || is_zero_vec(from) || is_zero_vec(to) {
                    return false;
                }
                let image = Subspace::span(n, &[g.mul_vec(from)]);
                image
                    .column_space_equal(&Subspace::span(n, std::slice::from_ref(to)))
                    .unwrap_or(false)
            }
            Claim::MapsSubspace { from, to } => {
                from.ambient_dim() == n && from.apply(g).column_space_equal(to).unwrap_or(false)
            }
            Claim::MapsVector { from, to } => {
                from.len() == n && to.len() == n && g.mul_vec(from) == *to
            }
        }
    }
}

/// A group element together with the claim it certifies.
#[derive(Clone, Debug)]
pub struct Witness {
    pub group: GroupSpec,
    pub element: Matrix,
    pub claim: Claim,
    pub verified: bool,
}

impl Witness {
    /// Builds a witness and records whether it checks out.
    pub fn new(group: GroupSpec, element: Matrix, claim: Claim) -> Witness {
        let mut w = Witness {
            group,
            element,
            claim,
            verified: false,
        };
        w.verified = w.reverify();
        w
    }

    /// Membership and claim, rechecked from scratch.
    pub fn reverify(&self) -> bool {
        self.claim.ambient_dim() == self.group.ambient_dim()
            && self.group.contains(&self.element).unwrap_or(false)
            && self.claim.holds(&self.element)
    }

    /// `next ∘ self`, for `next` starting where `self` ends.
    pub fn compose(&self, next: &Witness) -> Result<Witness, WitnessError> {
        if self.group.name() != next.group.name() || self.group.params() != next.group.params() {
            return Err(WitnessError::Internal(
                "composing witnesses of different groups".into(),
            ));
        }
        self.element.tower().join(&next.element.tower())?;
        let claim = match (&self.claim, &next.claim) {
            (Claim::MapsLine { from, to }, Claim::MapsLine { from: f2, to: t2 }) => {
                let n = to.len();
                let a = Subspace::span(n, std::slice::from_ref(to));
                let b = Subspace::span(n, std::slice::from_ref(f2));
                if !a.column_space_equal(&b)? {
                    return Err(WitnessError::Internal(
                        "witness chain does not connect".into(),
                    ));
                }
                Claim::MapsLine {
                    from: from.clone(),
                    to: t2.clone(),
                }
            }
            (Claim::MapsSubspace { from, to }, Claim::MapsSubspace { from: f2, to: t2 }) => {
                if !to.column_space_equal(f2)? {
                    return Err(WitnessError::Internal(
                        "witness chain does not connect".into(),
                    ));
                }
                Claim::MapsSubspace {
                    from: from.clone(),
                    to: t2.clone(),
                }
            }
            (Claim::MapsVector { from, to }, Claim::MapsVector { from: f2, to: t2 }) => {
                if to != f2 {
                    return Err(WitnessError::Internal(
                        "witness chain does not connect".into(),
                    ));
                }
                Claim::MapsVector {
                    from: from.clone(),
                    to: t2.clone(),
                }
            }
            _ => return Err(WitnessError::Internal("claims of different kinds".into())),
        };
        Ok(Witness::new(
            self.group.clone(),
            next.element.mul(&self.element),
            claim,
        ))
    }

    pub fn to_json(&self) -> Value {
        let (from, to) = self.claim.ends();
        let tower = common_tower(
            self.element
                .entries()
                .iter()
                .chain(from.iter().flatten())
                .chain(to.iter().flatten()),
        );
        let vecs = |vs: &[Vector]| -> Value {
            Value::Array(
                vs.iter()
                    .map(|v| serial::vector_in_tower_json(&tower, v))
                    .collect(),
            )
        };
        let p = self.group.params();
        json!({
            "schema": WITNESS_SCHEMA,
            "group": { "name": self.group.name(), "n": p.n, "p": p.p, "q": p.q },
            "radicands": serial::radicands_to_json(&tower),
            "element": serial::matrix_in_tower_json(&tower, &self.element),
            "claim": { "kind": self.claim.kind(), "from": vecs(&from), "to": vecs(&to) },
        })
    }

    /// Parses a serialized witness; `verified` is recomputed, never read.
    pub fn from_json(v: &Value) -> Result<Witness, WitnessError> {
        let perr = |m: &str| WitnessError::Parse(m.to_string());
        if v.get("schema").and_then(Value::as_str) != Some(WITNESS_SCHEMA) {
            return Err(perr("missing or unknown schema"));
        }
        let g = v.get("group").ok_or_else(|| perr("group"))?;
        let name = g
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| perr("group name"))?;
        let num = |k: &str| -> Result<usize, WitnessError> {
            Ok(g.get(k).and_then(Value::as_u64).unwrap_or(0) as usize)
        };
        let params = GroupParams {
            n: num("n")?,
            p: num("p")?,
            q: num("q")?,
        };
        let group = GroupSpec::by_name(name, params)?;
        let parse = |e: ScalarError| WitnessError::Parse(e.to_string());
        let tower =
            serial::radicands_from_json(v.get("radicands").ok_or_else(|| perr("radicands"))?)
                .map_err(parse)?;
        let element =
            serial::matrix_in_tower(&tower, v.get("element").ok_or_else(|| perr("element"))?)
                .map_err(parse)?;
        let c = v.get("claim").ok_or_else(|| perr("claim"))?;
        let vecs = |k: &str| -> Result<Vec<Vector>, WitnessError> {
            c.get(k)
                .and_then(Value::as_array)
                .ok_or_else(|| perr(k))?
                .iter()
                .map(|x| serial::vector_in_tower(&tower, x).map_err(parse))
                .collect()
        };
        let from = vecs("from")?;
        let to = vecs("to")?;
        let single = |vs: Vec<Vector>| -> Result<Vector, WitnessError> {
            match <[Vector; 1]>::try_from(vs) {
                Ok([v]) => Ok(v),
                Err(_) => Err(perr("expected exactly one vector")),
            }
        };
        let n = group.ambient_dim();
        if from.iter().chain(&to).any(|x| x.len() != n) {
            return Err(perr("claim vectors have the wrong length"));
        }
        let claim = match c.get("kind").and_then(Value::as_str) {
            Some("maps_line") => Claim::MapsLine {
                from: single(from)?,
                to: single(to)?,
            },
            Some("maps_vector") => Claim::MapsVector {
                from: single(from)?,
                to: single(to)?,
            },
            Some("maps_subspace") => Claim::MapsSubspace {
                from: Subspace::span(n, &from),
                to: Subspace::span(n, &to),
            },
            _ => return Err(perr("unknown claim kind")),
        };
        Ok(Witness::new(group, element, claim))
    }
}

fn require_symmetric(f: &FormSpec) -> Result<(), WitnessError> {
    if f.kind() != FormKind::Symmetric {
        return Err(FormError::WrongSymmetry.into());
    }
    Ok(())
}

/// `σ_u(x) = x − 2·f(x,u)/f(u,u)·u`.
pub fn reflection(f: &FormSpec, u: &[Scalar]) -> Result<Matrix, WitnessError> {
    require_symmetric(f)?;
    if u.len() != f.dim() {
        return Err(WitnessError::WrongDimension {
            expected: f.dim(),
            found: u.len(),
        });
    }
    let q = f.norm(u);
    if q.is_zero() {
        return Err(WitnessError::IsotropicVector);
    }
    let gu = f.gram().mul_vec(u);
    let c = &Scalar::from_int(-2) / &q;
    let outer = Matrix::from_fn(u.len(), u.len(), |r, k| &(&c * &u[r]) * &gu[k]);
    Ok(Matrix::identity(u.len()).add(&outer))
}

/// Candidate vectors of a subspace, in a fixed order: basis vectors, then
/// pairwise sums and differences, then pseudo-random integer combinations
/// from a fixed seed.
fn search_vector(basis: &[Vector], accept: impl Fn(&Vector) -> bool) -> Option<Vector> {
    for v in basis {
        if accept(v) {
            return Some(v.clone());
        }
    }
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            for v in [vadd(&basis[a], &basis[b]), vsub(&basis[a], &basis[b])] {
                if accept(&v) {
                    return Some(v);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..256 {
        let v = basis
            .iter()
            .fold(vec![Scalar::zero(); basis[0].len()], |acc, b| {
                let c = Scalar::from_int(rng.random_range(-4..=4));
                vadd(&acc, &vscale(&c, b))
            });
        if !is_zero_vec(&v) && accept(&v) {
            return Some(v);
        }
    }
    None
}

/// An isometry of `f` with `g·A[k] = B[k]`, built from reflections.
///
/// Each frame vector is moved by `σ_{a−b}` when `a − b` is anisotropic, by
/// `σ_b∘σ_{a+b}` when that fixes the vectors already placed, and otherwise
/// through an intermediate `c = σ_w(a)`. With `require_special` a final
/// reflection in an anisotropic vector orthogonal to `B` fixes the
/// determinant. No square roots are taken.
pub fn witt_transport(
    f: &FormSpec,
    frame_a: &[Vector],
    frame_b: &[Vector],
    require_special: bool,
    extra_real: bool,
) -> Result<Matrix, WitnessError> {
    require_symmetric(f)?;
    let m = f.dim();
    if frame_a.len() != frame_b.len() {
        return Err(WitnessError::GramMismatch);
    }
    for v in frame_a.iter().chain(frame_b) {
        if v.len() != m {
            return Err(WitnessError::WrongDimension {
                expected: m,
                found: v.len(),
            });
        }
    }
    let k = frame_a.len();
    for i in 0..k {
        for j in 0..k {
            if f.value(&frame_a[i], &frame_a[j]) != f.value(&frame_b[i], &frame_b[j]) {
                return Err(WitnessError::GramMismatch);
            }
        }
    }
    if k > 0
        && (Matrix::from_columns(m, frame_a).rank() < k
            || Matrix::from_columns(m, frame_b).rank() < k)
    {
        return Err(WitnessError::DependentFrame);
    }
    if extra_real
        && (!f.gram().is_real()
            || frame_a
                .iter()
                .chain(frame_b)
                .flatten()
                .any(|x| !x.is_real()))
    {
        return Err(WitnessError::Internal(
            "real transport needs real data".into(),
        ));
    }
    let perp_of = |vs: &[Vector]| -> Vec<Vector> { f.perp(&Subspace::span(m, vs)).basis_vectors() };
    let mut g = Matrix::identity(m);
    for j in 0..k {
        let a = g.mul_vec(&frame_a[j]);
        let b = frame_b[j].clone();
        if a == b {
            continue;
        }
        let placed = &frame_b[..j];
        let d = vsub(&a, &b);
        if !f.norm(&d).is_zero() {
            g = reflection(f, &d)?.mul(&g);
            continue;
        }
        let s = vadd(&a, &b);
        let fixes_placed = placed
            .iter()
            .all(|p| f.value(p, &s).is_zero() && f.value(p, &b).is_zero());
        if fixes_placed && !f.norm(&s).is_zero() && !f.norm(&b).is_zero() {
            g = reflection(f, &b)?.mul(&reflection(f, &s)?).mul(&g);
            continue;
        }
        let room = perp_of(placed);
        let w = search_vector(&room, |w| {
            !f.norm(w).is_zero() && !f.value(&a, w).is_zero() && !f.value(&b, w).is_zero()
        })
        .ok_or_else(|| WitnessError::Internal("no intermediate reflection vector".into()))?;
        let sw = reflection(f, &w)?;
        let c = sw.mul_vec(&a);
        g = reflection(f, &vsub(&c, &b))?.mul(&sw).mul(&g);
    }
    if require_special && g.det() != Scalar::one() {
        let room = perp_of(frame_b);
        let w = if room.is_empty() {
            None
        } else {
            search_vector(&room, |w| !f.norm(w).is_zero())
        };
        let w = w.ok_or(WitnessError::NoRoomForDeterminant)?;
        g = reflection(f, &w)?.mul(&g);
    }
    for (x, y) in frame_a.iter().zip(frame_b) {
        if g.mul_vec(x) != *y {
            return Err(WitnessError::Internal(
                "transport misses the target frame".into(),
            ));
        }
    }
    if extra_real && !g.is_real() {
        return Err(WitnessError::Internal(
            "transport left the real matrices".into(),
        ));
    }
    Ok(g)
}

fn sign_of(s: &Scalar) -> Result<i8, WitnessError> {
    Ok(s.sign()?)
}

/// `h`-orthogonal decomposition `C²ⁿ = P₁ ⊕ … ⊕ Pₙ`, `Pₖ = span{zₖ, φ(zₖ)}`,
/// seeded with `z`. Returns the seeds `zₖ` (unnormalized).
fn plane_decomposition(m: &StandardModel, z: &[Scalar]) -> Result<Vec<Vector>, WitnessError> {
    let n = m.n();
    let dim = m.dim();
    let h = m.h();
    let s0 = sign_of(&h.norm(z))?;
    let (mut pos_left, mut neg_left, split) = match m.case() {
        ModelCase::Projective {
            variant: ProjectiveVariant::Signature { p, q },
            ..
        } => (p, q, false),
        _ => (n, n, true),
    };
    fn take(s: i8, pos_left: &mut usize, neg_left: &mut usize) {
        if s > 0 {
            *pos_left = pos_left.saturating_sub(1);
        } else {
            *neg_left = neg_left.saturating_sub(1);
        }
    }
    if !split {
        take(s0, &mut pos_left, &mut neg_left);
    }
    let mut seeds = vec![z.to_vec()];
    let mut ortho: Vec<(Vector, Scalar)> = Vec::new();
    let push_plane = |ortho: &mut Vec<(Vector, Scalar)>, s: &Vector| -> Result<(), WitnessError> {
        let ps = m.phi(s)?;
        let hs = h.norm(s);
        let hp = h.norm(&ps);
        ortho.push((s.clone(), hs));
        ortho.push((ps, hp));
        Ok(())
    };
    push_plane(&mut ortho, &seeds[0])?;
    for _ in 1..n {
        let want: i8 = if split {
            0
        } else if pos_left > 0 {
            1
        } else {
            -1
        };
        let project = |x: &Vector| -> Vector {
            ortho.iter().fold(x.clone(), |acc, (u, hu)| {
                let c = &h.value(x, u) / hu;
                vsub(&acc, &vscale(&c, u))
            })
        };
        let good = |v: &Vector| -> bool {
            match h.norm(v).sign() {
                Ok(0) | Err(_) => false,
                Ok(s) => want == 0 || s == want,
            }
        };
        let projs: Vec<Vector> = (0..dim).map(|j| project(&unit(dim, j))).collect();
        let mut seed = projs.iter().find(|v| good(v)).cloned();
        if seed.is_none() {
            'pairs: for a in 0..dim {
                for b in a + 1..dim {
                    let i_b = vscale(&Scalar::i(), &projs[b]);
                    for v in [vadd(&projs[a], &projs[b]), vadd(&projs[a], &i_b)] {
                        if good(&v) {
                            seed = Some(v);
                            break 'pairs;
                        }
                    }
                }
            }
        }
        if seed.is_none() {
            let used: Vec<Vector> = ortho.iter().map(|(u, _)| u.clone()).collect();
            let comp = h.perp(&Subspace::span(dim, &used));
            let gram = h.restrict_gram(&comp);
            let (s, _) = linalg::congruence_diagonalize(&gram, Pairing::Sesquilinear);
            let basis = comp.basis().mul(&s);
            seed = basis.columns().into_iter().find(|v| good(v));
        }
        let mut seed = seed
            .ok_or_else(|| WitnessError::Internal("no definite seed in the h-complement".into()))?;
        let sign = sign_of(&h.norm(&seed))?;
        if split && sign < 0 {
            seed = m.phi(&seed)?;
        }
        if !split {
            take(sign, &mut pos_left, &mut neg_left);
        }
        push_plane(&mut ortho, &seed)?;
        seeds.push(seed);
    }
    Ok(seeds)
}

/// An element of `Sp₂ₙ(R)` (split model) or `Sp(2p,2q)` (signature model)
/// taking the line of `z` to the line of `z̃`.
///
/// Both sides are split into `h`-orthogonal planes `span{zₖ, φ(zₖ)}` with
/// the same sign pattern; the `z̃ₖ` are rescaled by `√(h(zₖ)/h(z̃ₖ))` and the
/// frames `(zₖ, φ(zₖ))` are matched basis to basis.
pub fn transport_positive_line_sp(
    m: &StandardModel,
    z: &[Scalar],
    z_tilde: &[Scalar],
) -> Result<Witness, WitnessError> {
    transport_positive_line_sp_in(m, z, z_tilde, &Tower::base())
}

/// [`transport_positive_line_sp`] with square roots adjoined on top of the
/// shared tower `context`, so that witnesses built in sequence multiply.
pub fn transport_positive_line_sp_in(
    m: &StandardModel,
    z: &[Scalar],
    z_tilde: &[Scalar],
    context: &Tower,
) -> Result<Witness, WitnessError> {
    let (n, group) = match m.case() {
        ModelCase::Projective {
            n,
            variant: ProjectiveVariant::Split,
        } => (n, groups::sp2n_r(n)?),
        ModelCase::Projective {
            n,
            variant: ProjectiveVariant::Signature { p, q },
        } => (n, groups::sp_2p2q(p, q)?),
        _ => return Err(WitnessError::WrongModel("projective")),
    };
    for v in [z, z_tilde] {
        if v.len() != 2 * n {
            return Err(WitnessError::WrongDimension {
                expected: 2 * n,
                found: v.len(),
            });
        }
    }
    let h = m.h();
    let s = sign_of(&h.norm(z))?;
    let st = sign_of(&h.norm(z_tilde))?;
    if s == 0 || st == 0 {
        return Err(WitnessError::NullLine);
    }
    if s != st {
        return Err(WitnessError::SignMismatch);
    }
    let seeds = plane_decomposition(m, z)?;
    let seeds_t = plane_decomposition(m, z_tilde)?;
    let mut tower: Tower = context.join(&common_tower(z.iter().chain(z_tilde)))?;
    let mut cols = Vec::with_capacity(2 * n);
    let mut cols_t = Vec::with_capacity(2 * n);
    for (a, b) in seeds.iter().zip(&seeds_t) {
        let ratio = &h.norm(a) / &h.norm(b);
        if ratio.sign()? <= 0 {
            return Err(WitnessError::Internal("seed signs differ".into()));
        }
        let (t, lambda) = tower.sqrt(&ratio)?;
        tower = t;
        let b = vscale(&lambda, b);
        cols.push(a.clone());
        cols.push(m.phi(a)?);
        cols_t.push(m.phi(&b)?);
        cols_t.push(b);
        let last = cols_t.len();
        cols_t.swap(last - 2, last - 1);
    }
    let f = Matrix::from_columns(2 * n, &cols);
    let ft = Matrix::from_columns(2 * n, &cols_t);
    let t = ft.mul(&f.inverse()?);
    let w = Witness::new(
        group,
        t,
        Claim::MapsLine {
            from: z.to_vec(),
            to: z_tilde.to_vec(),
        },
    );
    if !w.verified {
        return Err(WitnessError::Internal(
            "transport failed re-verification".into(),
        ));
    }
    Ok(w)
}

fn isotropic_params(m: &StandardModel) -> Result<(usize, usize, usize), WitnessError> {
    match m.case() {
        ModelCase::Isotropic { n, p, q } => Ok((n, p, q)),
        _ => Err(WitnessError::WrongModel("isotropic")),
    }
}

fn check_isotropic_plane(m: &StandardModel, w: &Subspace) -> Result<(), WitnessError> {
    let n = m.n();
    if w.ambient_dim() != 2 * n {
        return Err(WitnessError::WrongDimension {
            expected: 2 * n,
            found: w.ambient_dim(),
        });
    }
    if w.dim() != n {
        return Err(WitnessError::WrongDimension {
            expected: n,
            found: w.dim(),
        });
    }
    if !m.b().is_isotropic(w) {
        return Err(WitnessError::NotIsotropic);
    }
    Ok(())
}

fn coordinate_span(dim: usize, coords: &[usize]) -> Subspace {
    let vs: Vec<Vector> = coords.iter().map(|&c| unit(dim, c)).collect();
    Subspace::span(dim, &vs)
}

/// An element of `SO₂ₙ₋₁(C) = Fix(e₂ₙ)` taking `Ŵ` to
/// `span{e_k + i·e_{n+k}}`.
///
/// At each level, `Ŵ = W ⊕ C(v + i·e_last)` with `b(v,v) = 1`; `v` is moved
/// to `e_{c[m−1]}` by a Witt transport inside `span(e_c) ∩ e_last^⊥`, which
/// leaves `W` in the span of the remaining coordinates.
pub fn isotropic_normal_form_complex(
    m: &StandardModel,
    w_hat: &Subspace,
) -> Result<Witness, WitnessError> {
    let (n, _, _) = isotropic_params(m)?;
    check_isotropic_plane(m, w_hat)?;
    let dim = 2 * n;
    let mut g = Matrix::identity(dim);
    let mut cur = w_hat.clone();
    let mut coords: Vec<usize> = (0..dim).collect();
    let i = Scalar::i();
    while !coords.is_empty() {
        let mm = coords.len() / 2;
        let last = coords[2 * mm - 1];
        let vcoords = &coords[..2 * mm - 1];
        let mut basis = cur.basis_vectors();
        if basis.iter().all(|v| v[last].is_zero()) {
            if coords.len() == dim {
                return Err(WitnessError::InsideV);
            }
            // quarter turn e_j → e_last, e_last → −e_j inside the block
            let j = *vcoords
                .iter()
                .find(|&&c| basis.iter().any(|v| !v[c].is_zero()))
                .ok_or_else(|| WitnessError::Internal("empty block".into()))?;
            let mut r = Matrix::identity(dim);
            r.set(j, j, Scalar::zero());
            r.set(last, last, Scalar::zero());
            r.set(last, j, Scalar::one());
            r.set(j, last, Scalar::from_int(-1));
            g = r.mul(&g);
            cur = cur.apply(&r);
            basis = cur.basis_vectors();
        }
        let w0 = basis.iter().find(|v| !v[last].is_zero()).unwrap();
        let w = vscale(&(&i / &w0[last]), w0);
        let mut v = w.clone();
        v[last] = Scalar::zero();
        if !m.b().norm(&v).is_one() {
            return Err(WitnessError::Internal(
                "normalized vector has b(v,v) ≠ 1".into(),
            ));
        }
        let v_loc: Vector = vcoords.iter().map(|&c| v[c].clone()).collect();
        if mm == 1 {
            if v_loc[0] != Scalar::one() {
                return Err(WitnessError::OppositeComponent);
            }
        } else {
            let local = witt_transport(
                &FormSpec::standard(2 * mm - 1),
                &[v_loc],
                &[unit(2 * mm - 1, mm - 1)],
                true,
                false,
            )?;
            let big = local.embed(dim, vcoords);
            g = big.mul(&g);
            cur = cur.apply(&big);
        }
        let pivot = coords[mm - 1];
        coords.retain(|&c| c != pivot && c != last);
        let next = cur.intersection(&coordinate_span(dim, &coords));
        if next.dim() != mm - 1 {
            return Err(WitnessError::Internal(
                "complement plane has the wrong dimension".into(),
            ));
        }
        cur = next;
    }
    let target = m.normal_form_complex()?;
    let w = Witness::new(
        groups::so2n1_c(n)?,
        g,
        Claim::MapsSubspace {
            from: w_hat.clone(),
            to: target,
        },
    );
    if !w.verified {
        return Err(WitnessError::Internal(
            "normal form failed re-verification".into(),
        ));
    }
    Ok(w)
}

/// An element of `SO(p,q)` taking `Ŵ` to the real normal form `Ŵ₀`.
///
/// Works in signature coordinates `y = D⁻¹x`, where `SO(p,q)` is real. The
/// plane `W = Ŵ ∩ V` is diagonalized for `h`; each basis vector `x + i·y`
/// has `b(x,x) = b(y,y)`, `b(x,y) = 0`, and the real frame of all `(x, y)`
/// is carried to `(λe_a, λe_b)` by one real Witt transport inside `V`. The
/// remaining line is `e_left ± i·e₂ₙ`; a reflection in `e_left` settles the
/// sign when it also fixes the determinant, otherwise `Ŵ` lies in the other
/// family of isotropic planes.
pub fn isotropic_normal_form_real(
    m: &StandardModel,
    w_hat: &Subspace,
) -> Result<Witness, WitnessError> {
    let (n, p, q) = isotropic_params(m)?;
    check_isotropic_plane(m, w_hat)?;
    let dim = 2 * n;
    let sig = m.h().restricted_signature(w_hat)?;
    if sig != m.open_orbit_signature()? {
        return Err(WitnessError::NotOpenOrbit(sig));
    }
    let d = m.signature_change()?;
    let d_inv = d.inverse()?;
    let e_hat = FormSpec::hermitian(m.signature_gram()?)?;
    let wy = w_hat.apply(&d_inv);
    let v_coords: Vec<usize> = (0..dim - 1).collect();
    let w = wy.intersection(&coordinate_span(dim, &v_coords));
    if w.dim() != n - 1 {
        return Err(WitnessError::InsideV);
    }
    let w_sig = e_hat.restricted_signature(&w)?;
    if w_sig.zero > 0 {
        return Err(WitnessError::Degenerate);
    }
    let nf = m.real_normal_form_pairs()?;
    if w_sig.pos != nf.positive.len() || w_sig.neg != nf.negative.len() {
        return Err(WitnessError::NotOpenOrbit(sig));
    }
    let (s, diag) = linalg::congruence_diagonalize(&e_hat.restrict_gram(&w), Pairing::Sesquilinear);
    let vecs = w.basis().mul(&s).columns();
    let mut order: Vec<usize> = (0..vecs.len()).collect();
    order.sort_by_key(|&k| diag[k].sign().map(|s| -s).unwrap_or(0));
    let b_v = FormSpec::symmetric(crate::forms::e_pq(p, q))?;
    let mut tower = common_tower(w_hat.basis().entries());
    let (mut pos, mut neg) = (nf.positive.iter(), nf.negative.iter());
    let mut frame_a = Vec::new();
    let mut frame_b = Vec::new();
    for k in order {
        let x: Vector = vecs[k][..dim - 1].iter().map(Scalar::re).collect();
        let y: Vector = vecs[k][..dim - 1].iter().map(Scalar::im).collect();
        let c = b_v.norm(&x);
        let (a_idx, b_idx) = match c.sign()? {
            1 => pos.next(),
            -1 => neg.next(),
            _ => None,
        }
        .copied()
        .ok_or_else(|| WitnessError::Internal("signature bookkeeping".into()))?;
        let abs = if c.sign()? < 0 { -&c } else { c };
        let (t, lambda) = tower.sqrt(&abs)?;
        tower = t;
        frame_a.push(x);
        frame_a.push(y);
        frame_b.push(vscale(&lambda, &unit(dim - 1, a_idx)));
        frame_b.push(vscale(&lambda, &unit(dim - 1, b_idx)));
    }
    let g_v = witt_transport(&b_v, &frame_a, &frame_b, false, true)?;
    let mut g = g_v.embed(dim, &v_coords);
    let moved = wy.apply(&g);
    let u = moved
        .basis_vectors()
        .into_iter()
        .find(|v| !v[dim - 1].is_zero())
        .ok_or(WitnessError::InsideV)?;
    let left = nf.leftover;
    if u[left].is_zero() {
        return Err(WitnessError::Internal(
            "last line has no e_left component".into(),
        ));
    }
    let s = &u[dim - 1] / &(&Scalar::i() * &u[left]);
    let det = g.det();
    let one = Scalar::one();
    let minus = Scalar::from_int(-1);
    if s == minus && det == minus {
        let mut flip = Matrix::identity(dim);
        flip.set(left, left, minus.clone());
        g = flip.mul(&g);
    } else if !(s == one && det == one) {
        return Err(WitnessError::OppositeComponent);
    }
    let g_x = d.mul(&g).mul(&d_inv);
    let w = Witness::new(
        groups::so_pq(p, q)?,
        g_x,
        Claim::MapsSubspace {
            from: w_hat.clone(),
            to: m.normal_form_real()?,
        },
    );
    if !w.verified {
        return Err(WitnessError::Internal(
            "normal form failed re-verification".into(),
        ));
    }
    Ok(w)
}

/// A product of `count` reflections in pseudo-random anisotropic vectors
/// with integer (or, unless `real`, Gaussian-integer) entries in
/// `[−bound, bound]`. An even `count` gives determinant one.
pub fn random_isometry(
    f: &FormSpec,
    rng: &mut impl Rng,
    bound: i64,
    count: usize,
    real: bool,
) -> Result<Matrix, WitnessError> {
    let m = f.dim();
    let mut g = Matrix::identity(m);
    let mut made = 0;
    let mut tries = 0;
    while made < count {
        tries += 1;
        if tries > 1000 {
            return Err(WitnessError::Internal("no anisotropic sample".into()));
        }
        let u: Vector = (0..m)
            .map(|_| {
                let re = rng.random_range(-bound..=bound);
                let im = if real {
                    0
                } else {
                    rng.random_range(-bound..=bound)
                };
                Scalar::gaussian_int(re, im)
            })
            .collect();
        if f.norm(&u).is_zero() {
            continue;
        }
        g = reflection(f, &u)?.mul(&g);
        made += 1;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::e_pq;
    use crate::linalg::int_vector;

    #[test]
    fn reflection_examples() {
        let f = FormSpec::standard(3);
        let r = reflection(&f, &unit(3, 0)).unwrap();
        assert_eq!(r, Matrix::diag_int(&[-1, 1, 1]));
        let u = int_vector(&[1, 2, -1]);
        let s = reflection(&f, &u).unwrap();
        assert_eq!(s.mul(&s), Matrix::identity(3));
        assert_eq!(s.det(), Scalar::from_int(-1));
        assert_eq!(s.mul_vec(&u), vscale(&Scalar::from_int(-1), &u));
        for v in f
            .perp(&Subspace::span(3, std::slice::from_ref(&u)))
            .basis_vectors()
        {
            assert_eq!(s.mul_vec(&v), v);
        }
        let iso = vec![Scalar::one(), Scalar::i(), Scalar::zero()];
        assert_eq!(reflection(&f, &iso), Err(WitnessError::IsotropicVector));
    }

    #[test]
    fn witt_examples() {
        let f = FormSpec::standard(2);
        let g = witt_transport(&f, &[unit(2, 0)], &[unit(2, 1)], false, false).unwrap();
        assert_eq!(g.mul_vec(&unit(2, 0)), unit(2, 1));
        assert_eq!(g.transpose().mul(&g), Matrix::identity(2));

        let same = witt_transport(&f, &[unit(2, 0)], &[unit(2, 0)], true, false).unwrap();
        assert_eq!(same, Matrix::identity(2));

        let e21 = FormSpec::symmetric(e_pq(2, 1)).unwrap();
        let target = vec![
            Scalar::from_ratio(5, 4),
            Scalar::zero(),
            Scalar::from_ratio(3, 4),
        ];
        let g = witt_transport(
            &e21,
            &[unit(3, 0)],
            std::slice::from_ref(&target),
            true,
            true,
        )
        .unwrap();
        assert!(groups::so_real(2, 1).contains(&g).unwrap());
        assert_eq!(g.mul_vec(&unit(3, 0)), target);

        assert_eq!(
            witt_transport(&f, &[unit(2, 0)], &[int_vector(&[1, 1])], false, false),
            Err(WitnessError::GramMismatch)
        );
        // full frame with det −1 leaves no room
        let swap = [unit(2, 1), unit(2, 0)];
        assert_eq!(
            witt_transport(&f, &[unit(2, 0), unit(2, 1)], &swap, true, false),
            Err(WitnessError::NoRoomForDeterminant)
        );
    }

    #[test]
    fn witt_handles_isotropic_differences() {
        let f = FormSpec::standard(4);
        let a = unit(4, 0);
        let b = vec![Scalar::one(), Scalar::i(), Scalar::one(), Scalar::zero()];
        assert_eq!(f.norm(&b), Scalar::one());
        assert!(f.norm(&vsub(&a, &b)).is_zero());
        let g = witt_transport(
            &f,
            std::slice::from_ref(&a),
            std::slice::from_ref(&b),
            true,
            false,
        )
        .unwrap();
        assert_eq!(g.mul_vec(&a), b);
        assert!(groups::so_c(4).contains(&g).unwrap());
        // a placed vector p with f(p, a + b) ≠ 0 forces the intermediate step
        let p = int_vector(&[1, 0, 0, 1]);
        let g = witt_transport(
            &f,
            &[p.clone(), a.clone()],
            &[p.clone(), b.clone()],
            true,
            false,
        )
        .unwrap();
        assert_eq!(g.mul_vec(&p), p);
        assert_eq!(g.mul_vec(&a), b);
        assert!(groups::so_c(4).contains(&g).unwrap());
    }

    #[test]
    fn sp_transport_examples() {
        let m = StandardModel::projective_split(1).unwrap();
        let w = transport_positive_line_sp(&m, &unit(2, 0), &int_vector(&[2, 1])).unwrap();
        assert!(w.verified);
        assert_eq!(w.group.name(), "Sp2nR");
        let same = transport_positive_line_sp(&m, &unit(2, 0), &unit(2, 0)).unwrap();
        assert!(same.verified);

        let m2 = StandardModel::projective_split(2).unwrap();
        let half = vec![
            Scalar::zero(),
            Scalar::zero(),
            Scalar::one(),
            Scalar::from_ratio(1, 2),
        ];
        let w = transport_positive_line_sp(&m2, &unit(4, 2), &half).unwrap();
        assert!(w.verified);

        assert_eq!(
            transport_positive_line_sp(&m2, &unit(4, 0), &unit(4, 2)).unwrap_err(),
            WitnessError::SignMismatch
        );
        assert_eq!(
            transport_positive_line_sp(&m2, &int_vector(&[1, 0, 1, 0]), &unit(4, 0)).unwrap_err(),
            WitnessError::NullLine
        );
    }

    #[test]
    fn sp_pq_transport() {
        let m = StandardModel::projective_pq(1, 1).unwrap();
        let z = int_vector(&[1, 0, 0, 0]);
        let zt = vec![
            Scalar::gaussian_int(2, 1),
            Scalar::one(),
            Scalar::gaussian_int(0, -1),
            Scalar::zero(),
        ];
        assert_eq!(m.h().norm(&zt).sign().unwrap(), 1);
        let w = transport_positive_line_sp(&m, &z, &zt).unwrap();
        assert_eq!(w.group.name(), "Sp(2p,2q)");
        assert!(w.verified);
    }

    #[test]
    fn complex_normal_form_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=3 {
            let m = StandardModel::isotropic(n, 2, 2 * n - 3).unwrap();
            let nf = m.normal_form_complex().unwrap();
            let id = isotropic_normal_form_complex(&m, &nf).unwrap();
            assert!(id.verified);
            let vf = FormSpec::standard(2 * n - 1);
            for _ in 0..3 {
                let g0 = random_isometry(&vf, &mut rng, 3, 4, false)
                    .unwrap()
                    .embed(2 * n, &(0..2 * n - 1).collect::<Vec<_>>());
                let scrambled = nf.apply(&g0);
                let w = isotropic_normal_form_complex(&m, &scrambled).unwrap();
                assert!(w.verified);
            }
        }
    }

    #[test]
    fn complex_normal_form_rejects() {
        let m = StandardModel::isotropic(2, 2, 1).unwrap();
        let line = Subspace::span(
            4,
            &[vec![
                Scalar::one(),
                Scalar::i(),
                Scalar::zero(),
                Scalar::zero(),
            ]],
        );
        assert!(matches!(
            isotropic_normal_form_complex(&m, &line),
            Err(WitnessError::WrongDimension { .. })
        ));
        let not_iso = Subspace::span(4, &[unit(4, 0), unit(4, 1)]);
        assert_eq!(
            isotropic_normal_form_complex(&m, &not_iso).unwrap_err(),
            WitnessError::NotIsotropic
        );
        let other = Subspace::span(
            4,
            &[
                vec![Scalar::one(), Scalar::zero(), Scalar::i(), Scalar::zero()],
                vec![Scalar::zero(), Scalar::one(), Scalar::zero(), -Scalar::i()],
            ],
        );
        assert!(m.b().is_isotropic(&other));
        assert_eq!(
            isotropic_normal_form_complex(&m, &other).unwrap_err(),
            WitnessError::OppositeComponent
        );
    }

    #[test]
    fn real_normal_form_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, p, q) in [(2, 2, 1), (3, 2, 3), (3, 3, 2), (2, 1, 2)] {
            let m = StandardModel::isotropic(n, p, q).unwrap();
            let nf = m.normal_form_real().unwrap();
            assert!(isotropic_normal_form_real(&m, &nf).unwrap().verified);
            let d = m.signature_change().unwrap();
            let vf = FormSpec::symmetric(e_pq(p, q)).unwrap();
            for _ in 0..3 {
                let gy = random_isometry(&vf, &mut rng, 3, 4, true)
                    .unwrap()
                    .embed(2 * n, &(0..2 * n - 1).collect::<Vec<_>>());
                let gx = d.mul(&gy).mul(&d.inverse().unwrap());
                assert!(groups::so_pq(p, q).unwrap().contains(&gx).unwrap());
                let w = isotropic_normal_form_real(&m, &nf.apply(&gx)).unwrap();
                assert!(w.verified, "({n},{p},{q})");
            }
        }
    }

    #[test]
    fn real_normal_form_rejects_closed_orbits() {
        let m = StandardModel::isotropic(2, 2, 1).unwrap();
        // span{e1 + i e3, e2 + i e4} is h-null
        let nf = m.normal_form_complex().unwrap();
        assert_eq!(
            isotropic_normal_form_real(&m, &nf).unwrap_err(),
            WitnessError::NotOpenOrbit(Signature::new(0, 0, 2))
        );
    }

    #[test]
    fn witness_json_round_trip() {
        let m = StandardModel::projective_split(2).unwrap();
        let zt = vec![
            Scalar::from_int(3),
            Scalar::i(),
            Scalar::one(),
            Scalar::zero(),
        ];
        let w = transport_positive_line_sp(&m, &unit(4, 0), &zt).unwrap();
        let text = w.to_json().to_string();
        let back = Witness::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert!(back.verified);
        assert_eq!(back.element, w.element);
        assert_eq!(back.to_json().to_string(), text);
    }

    #[test]
    fn composition() {
        let m = StandardModel::projective_split(1).unwrap();
        let a = unit(2, 0);
        let b = int_vector(&[2, 1]);
        let c = int_vector(&[3, -1]);
        let w1 = transport_positive_line_sp(&m, &a, &b).unwrap();
        let w2 = transport_positive_line_sp_in(&m, &b, &c, &w1.element.tower()).unwrap();
        let w = w1.compose(&w2).unwrap();
        assert!(w.verified);
        assert!(w2.compose(&w1).is_err());
        // separately built towers do not mix
        let w3 = transport_positive_line_sp(&m, &b, &c).unwrap();
        if w3.element.tower().depth() > 0 && w1.element.tower().depth() > 0 {
            assert!(matches!(w1.compose(&w3), Err(WitnessError::Scalar(_))));
        }
    }
}
