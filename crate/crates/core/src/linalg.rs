//! Dense exact linear algebra over the tower field: matrices, row reduction,
//! subspaces in canonical column-echelon form, congruence diagonalization of
//! forms, and the homogeneous linear solver behind every Lie algebra in the
//! crate.

use std::fmt;
use std::ops::Index;
use std::sync::Arc;

use thiserror::Error;

use crate::scalar::{Scalar, Tower};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is singular")]
    Singular,
}

pub type Vector = Vec<Scalar>;

/// The `k`-th standard basis vector of length `n`.
pub fn unit(n: usize, k: usize) -> Vector {
    (0..n)
        .map(|i| {
            if i == k {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
        .collect()
}

pub fn int_vector(v: &[i64]) -> Vector {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

pub fn vadd(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vscale(c: &Scalar, a: &[Scalar]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

pub fn vconj(a: &[Scalar]) -> Vector {
    a.iter().map(Scalar::conj).collect()
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

/// Real coordinates `[Re v₀, …, Re v_{n-1}, Im v₀, …, Im v_{n-1}]`.
pub fn realify(v: &[Scalar]) -> Vector {
    v.iter()
        .map(Scalar::re)
        .chain(v.iter().map(Scalar::im))
        .collect()
}

/// The smallest tower containing every scalar given.
pub fn common_tower<'a>(items: impl IntoIterator<Item = &'a Scalar>) -> Tower {
    let mut t = Tower::base();
    for s in items {
        if s.tower().depth() > 0 {
            t = t.join(s.tower()).expect("scalars from incompatible towers");
        }
    }
    t
}

/// A dense matrix of exact scalars, row-major. Shapes with zero rows or
/// columns are allowed (the Gram matrix of the zero subspace is `0×0`).
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![Scalar::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| {
            if r == c {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix::new(rows, cols, data)
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(rows.len(), cols, |r, c| Scalar::from_int(rows[r][c]))
    }

    pub fn from_rows(rows: Vec<Vector>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let data: Vec<Scalar> = rows.into_iter().flatten().collect();
        Matrix::new(n, cols, data)
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        Matrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let n = entries.len();
        Matrix::from_fn(n, n, |r, c| {
            if r == c {
                entries[r].clone()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn diag_int(entries: &[i64]) -> Self {
        Matrix::diag(&int_vector(entries))
    }

    /// `diag(a, b)` as a block matrix.
    pub fn block_diag(a: &Matrix, b: &Matrix) -> Self {
        let n = a.rows + b.rows;
        let m = a.cols + b.cols;
        Matrix::from_fn(n, m, |r, c| {
            if r < a.rows && c < a.cols {
                a[(r, c)].clone()
            } else if r >= a.rows && c >= a.cols {
                b[(r - a.rows, c - a.cols)].clone()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vector {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj(&self) -> Matrix {
        Matrix::new(
            self.rows,
            self.cols,
            self.data.iter().map(Scalar::conj).collect(),
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix::new(self.rows, self.cols, self.data.iter().map(f).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.map(|x| c * x)
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix add shape");
        Matrix::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sub shape");
        Matrix::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        )
    }

    pub fn neg(&self) -> Matrix {
        self.map(|x| -x)
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = &o[(k, c)];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * o.cols + c;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = &self[(r, k)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, o: &Matrix) -> Matrix {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(), |acc, i| &acc + &self[(i, i)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(Scalar::is_real)
    }

    pub fn tower(&self) -> Tower {
        common_tower(&self.data)
    }

    /// Rows `rs` and columns `cs` of `self`.
    pub fn submatrix(&self, rs: &[usize], cs: &[usize]) -> Matrix {
        Matrix::from_fn(rs.len(), cs.len(), |r, c| self[(rs[r], cs[c])].clone())
    }

    /// `[self | o]`.
    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows, "hstack rows");
        Matrix::from_fn(self.rows, self.cols + o.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                o[(r, c - self.cols)].clone()
            }
        })
    }

    /// Acts as `self` on the coordinates `idx` of an `n`-dimensional space
    /// and as the identity elsewhere.
    pub fn embed(&self, n: usize, idx: &[usize]) -> Matrix {
        assert!(self.is_square() && self.rows == idx.len());
        let mut out = Matrix::identity(n);
        for (a, &r) in idx.iter().enumerate() {
            for (b, &c) in idx.iter().enumerate() {
                out.set(r, c, self[(a, b)].clone());
            }
        }
        out
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m[(row, col)].inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m[(r, col)].clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let rc = &m[(row, c)];
                    if rc.is_zero() {
                        continue;
                    }
                    let v = &m[(r, c)] - &(&f * rc);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.rows > self.cols {
            return self.transpose().rref().1.len();
        }
        self.rref().1.len()
    }

    /// Right null space.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors: Vec<Vector> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(i, f)];
                }
                v
            })
            .collect();
        Subspace::from_independent(self.cols, vectors)
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                for c in 0..n {
                    m.data.swap(p * n + c, col * n + c);
                }
                det = -det;
            }
            let piv = m[(col, col)].clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            for r in col + 1..n {
                let f = &m[(r, col)] * &inv;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = &m[(r, c)] - &(&f * &m[(col, c)]);
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "inverse of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(Matrix::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Solves `self · x = b` for one particular solution.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        let col = Matrix::from_columns(self.rows, &[b.to_vec()]);
        let (r, pivots) = self.hstack(&col).rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }
}

/// A linear subspace of `K^n`, kept with an independent spanning set and
/// the reduced column-echelon form of its span.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    canonical: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in {}) {:?}",
            self.dim(),
            self.ambient_dim,
            self.canonical
        )
    }
}

fn column_echelon(ambient: usize, vectors: &[Vector]) -> Matrix {
    if vectors.is_empty() {
        return Matrix::zeros(ambient, 0);
    }
    let (r, pivots) = Matrix::from_rows(vectors.to_vec()).rref();
    Matrix::from_fn(ambient, pivots.len(), |i, j| r[(j, i)].clone())
}

impl Subspace {
    fn from_independent(ambient_dim: usize, vectors: Vec<Vector>) -> Self {
        let canonical = column_echelon(ambient_dim, &vectors);
        Subspace {
            ambient_dim,
            basis: Matrix::from_columns(ambient_dim, &vectors),
            canonical,
        }
    }

    /// The span of `vectors`; dependent generators are dropped.
    pub fn span(ambient_dim: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(ambient_dim);
        }
        let m = Matrix::from_columns(ambient_dim, vectors);
        let (_, pivots) = m.rref();
        let kept: Vec<Vector> = pivots.iter().map(|&p| vectors[p].clone()).collect();
        Subspace::from_independent(ambient_dim, kept)
    }

    pub fn column_space(m: &Matrix) -> Self {
        Subspace::span(m.rows(), &m.columns())
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
            canonical: Matrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace::span(ambient_dim, &Matrix::identity(ambient_dim).columns())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn canonical(&self) -> &Matrix {
        &self.canonical
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.columns()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        if is_zero_vec(v) {
            return true;
        }
        let mut vs = self.basis_vectors();
        vs.push(v.to_vec());
        Matrix::from_columns(self.ambient_dim, &vs).rank() == self.dim()
    }

    pub fn contains_subspace(&self, o: &Subspace) -> bool {
        o.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// Equality of spans, decided on the canonical forms.
    pub fn column_space_equal(&self, o: &Subspace) -> Result<bool, LinalgError> {
        if self.ambient_dim != o.ambient_dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "ambient {} vs {}",
                self.ambient_dim, o.ambient_dim
            )));
        }
        Ok(self.canonical == o.canonical)
    }

    /// Image under `g`.
    pub fn apply(&self, g: &Matrix) -> Subspace {
        Subspace::column_space(&g.mul(&self.basis))
    }

    pub fn conj(&self) -> Subspace {
        Subspace::column_space(&self.basis.conj())
    }

    /// Rows spanning the annihilator `{ℓ : ℓ·s = 0 ∀ s}`.
    pub fn annihilator(&self) -> Matrix {
        if self.dim() == 0 {
            return Matrix::identity(self.ambient_dim);
        }
        let k = self.basis.transpose().kernel();
        k.basis().transpose()
    }

    pub fn intersection(&self, o: &Subspace) -> Subspace {
        // v = A·x = B·y  ⇔  [A | -B]·(x, y) = 0
        let stacked = self.basis.hstack(&o.basis.neg());
        let ker = stacked.kernel();
        let vectors: Vec<Vector> = ker
            .basis_vectors()
            .iter()
            .map(|xy| self.basis.mul_vec(&xy[..self.dim()]))
            .collect();
        Subspace::span(self.ambient_dim, &vectors)
    }
}

/// Whether a form is bilinear or sesquilinear (conjugate-linear in the
/// second slot).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    Bilinear,
    Sesquilinear,
}

/// Counts of positive, negative and zero diagonal entries after congruence
/// diagonalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Signature {
    pub fn new(pos: usize, neg: usize, zero: usize) -> Self {
        Signature { pos, neg, zero }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.pos, self.neg, self.zero)
    }
}

/// Congruence diagonalization of the Gram matrix `g` of a symmetric or
/// Hermitian form, with value `zᵗ·g·w` (bilinear) or `zᵗ·g·conj(w)`.
///
/// Returns `(S, d)`: the columns of `S` form a basis in which the form is
/// `diag(d)`. A zero pivot is replaced by a nonzero diagonal entry further
/// down, or else by `s_k + c·s_j` for an off-diagonal `g_kj ≠ 0`.
pub fn congruence_diagonalize(g: &Matrix, pairing: Pairing) -> (Matrix, Vector) {
    let n = g.rows();
    let cj = |x: &Scalar| match pairing {
        Pairing::Bilinear => x.clone(),
        Pairing::Sesquilinear => x.conj(),
    };
    let gram = |s: &Matrix| -> Matrix {
        let right = match pairing {
            Pairing::Bilinear => s.clone(),
            Pairing::Sesquilinear => s.conj(),
        };
        s.transpose().mul(g).mul(&right)
    };
    let mut s = Matrix::identity(n);
    let mut a = g.clone();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                for r in 0..n {
                    s.data.swap(r * n + k, r * n + j);
                }
                a = gram(&s);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                let c = match pairing {
                    Pairing::Bilinear => Scalar::one(),
                    Pairing::Sesquilinear => a[(k, j)].clone(),
                };
                for r in 0..n {
                    let v = &s[(r, k)] + &(&c * &s[(r, j)]);
                    s.set(r, k, v);
                }
                a = gram(&s);
            } else {
                continue;
            }
        }
        let piv_inv = a[(k, k)].inv().expect("nonzero pivot");
        for i in k + 1..n {
            let f = &a[(i, k)] * &piv_inv;
            if f.is_zero() {
                continue;
            }
            for r in 0..n {
                let v = &s[(r, i)] - &(&f * &s[(r, k)]);
                s.set(r, i, v);
            }
            for c in 0..n {
                let v = &a[(i, c)] - &(&f * &a[(k, c)]);
                a.set(i, c, v);
            }
            let fc = cj(&f);
            for r in 0..n {
                let v = &a[(r, i)] - &(&fc * &a[(r, k)]);
                a.set(r, i, v);
            }
        }
    }
    let d = (0..n).map(|i| a[(i, i)].clone()).collect();
    (s, d)
}

pub fn is_hermitian(g: &Matrix) -> bool {
    g.is_square() && g.transpose() == g.conj()
}

/// Inertia of a Hermitian matrix.
pub fn hermitian_signature(g: &Matrix) -> Result<Signature, LinalgError> {
    if !is_hermitian(g) {
        return Err(LinalgError::NotHermitian);
    }
    let (_, d) = congruence_diagonalize(g, Pairing::Sesquilinear);
    let mut sig = Signature::new(0, 0, 0);
    for x in &d {
        match x.sign().expect("Hermitian diagonal is real") {
            1 => sig.pos += 1,
            -1 => sig.neg += 1,
            _ => sig.zero += 1,
        }
    }
    Ok(sig)
}

/// Ground field of a Lie algebra basis: complex span, or real span of
/// (possibly complex) matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ground {
    Complex,
    Real,
}

/// Coordinates of a matrix as a vector over the ground field.
pub fn ground_coords(x: &Matrix, ground: Ground) -> Vector {
    match ground {
        Ground::Complex => x.entries().to_vec(),
        Ground::Real => realify(x.entries()),
    }
}

/// Incremental span membership: rows kept in reduced echelon form.
#[derive(Clone, Debug, Default)]
pub struct SpanReducer {
    rows: Vec<(usize, Vector)>,
}

impl SpanReducer {
    pub fn new() -> Self {
        SpanReducer { rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after elimination against the stored rows.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().unwrap();
        let r: Vector = r.iter().map(|x| x * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// A basis of a matrix Lie algebra over its ground field.
#[derive(Clone, Debug)]
pub struct LieAlgebraBasis {
    ambient_dim: usize,
    elements: Vec<Matrix>,
    ground: Ground,
}

impl LieAlgebraBasis {
    /// Keeps a maximal independent subset of `elements`.
    pub fn from_elements(ambient_dim: usize, elements: Vec<Matrix>, ground: Ground) -> Self {
        let mut red = SpanReducer::new();
        let elements = elements
            .into_iter()
            .filter(|x| red.insert(&ground_coords(x, ground)))
            .collect();
        LieAlgebraBasis {
            ambient_dim,
            elements,
            ground,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn ground(&self) -> Ground {
        self.ground
    }

    /// Dimension over the ground field.
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    fn reducer(&self) -> SpanReducer {
        let mut red = SpanReducer::new();
        for x in &self.elements {
            red.insert(&ground_coords(x, self.ground));
        }
        red
    }

    pub fn span_contains(&self, x: &Matrix) -> bool {
        self.reducer().contains(&ground_coords(x, self.ground))
    }

    /// Every element of `o` (and, for a complex `o` inside a real `self`,
    /// its `i`-multiple) lies in the span of `self`.
    pub fn contains_algebra(&self, o: &LieAlgebraBasis) -> bool {
        let red = self.reducer();
        let i = Scalar::i();
        o.elements.iter().all(|x| {
            red.contains(&ground_coords(x, self.ground))
                && (o.ground == Ground::Real
                    || self.ground == Ground::Complex
                    || red.contains(&ground_coords(&x.scale(&i), self.ground)))
        })
    }

    /// Exact check that every bracket `[Xᵢ, Xⱼ]` lies in the span.
    pub fn is_bracket_closed(&self) -> bool {
        let red = self.reducer();
        for (a, x) in self.elements.iter().enumerate() {
            for y in &self.elements[a + 1..] {
                if !red.contains(&ground_coords(&x.commutator(y), self.ground)) {
                    return false;
                }
            }
        }
        true
    }

    /// Same matrices with complex span.
    pub fn complexified(&self) -> LieAlgebraBasis {
        LieAlgebraBasis::from_elements(self.ambient_dim, self.elements.clone(), Ground::Complex)
    }

    /// Dimension of `span(self) ∩ span(o)`; both must share a ground field.
    pub fn intersection_dim(&self, o: &LieAlgebraBasis) -> usize {
        assert_eq!(
            self.ground, o.ground,
            "intersection over mixed ground fields"
        );
        let mut red = self.reducer();
        let mut sum = self.dim();
        for x in &o.elements {
            if red.insert(&ground_coords(x, self.ground)) {
                sum += 1;
            }
        }
        self.dim() + o.dim() - sum
    }

    /// Elements `X` of the span with `f(X) = 0`, for a map `f` that is linear
    /// over the ground field.
    pub fn solve_in_span(&self, f: impl Fn(&Matrix) -> Vector) -> LieAlgebraBasis {
        if self.elements.is_empty() {
            return self.clone();
        }
        let cols: Vec<Vector> = self
            .elements
            .iter()
            .map(|x| {
                let r = f(x);
                match self.ground {
                    Ground::Complex => r,
                    Ground::Real => realify(&r),
                }
            })
            .collect();
        let rows = cols[0].len();
        let ker = if rows == 0 {
            Subspace::full(self.dim())
        } else {
            Matrix::from_columns(rows, &cols).kernel()
        };
        let elements = ker
            .basis_vectors()
            .iter()
            .map(|c| {
                self.elements
                    .iter()
                    .zip(c)
                    .filter(|(_, k)| !k.is_zero())
                    .fold(
                        Matrix::zeros(self.ambient_dim, self.ambient_dim),
                        |acc, (x, k)| acc.add(&x.scale(k)),
                    )
            })
            .collect();
        LieAlgebraBasis {
            ambient_dim: self.ambient_dim,
            elements,
            ground: self.ground,
        }
    }
}

/// A homogeneous linear condition on an `m×m` matrix unknown `X`.
#[derive(Clone)]
pub enum LinearCondition {
    /// `Xᵗ·G + G·X = 0`.
    PreservesBilinear(Matrix),
    /// `Xᵗ·G + G·conj(X) = 0`: the derivative of `gᵗ·G·conj(g) = G`.
    PreservesHermitian(Matrix),
    TraceZero,
    /// `X·v = 0`.
    Annihilates(Vector),
    /// `X = conj(X)`.
    RealEntries,
    /// `X = 0`.
    Vanishes,
    /// Any map linear in the entries of `X` (and their conjugates, when the
    /// system is solved over the real structure).
    Custom(Arc<dyn Fn(&Matrix) -> Vector + Send + Sync>),
}

impl fmt::Debug for LinearCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinearCondition::PreservesBilinear(_) => write!(f, "PreservesBilinear"),
            LinearCondition::PreservesHermitian(_) => write!(f, "PreservesHermitian"),
            LinearCondition::TraceZero => write!(f, "TraceZero"),
            LinearCondition::Annihilates(_) => write!(f, "Annihilates"),
            LinearCondition::RealEntries => write!(f, "RealEntries"),
            LinearCondition::Vanishes => write!(f, "Vanishes"),
            LinearCondition::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl LinearCondition {
    pub fn residual(&self, x: &Matrix) -> Vector {
        match self {
            LinearCondition::PreservesBilinear(g) => {
                x.transpose().mul(g).add(&g.mul(x)).entries().to_vec()
            }
            LinearCondition::PreservesHermitian(g) => x
                .transpose()
                .mul(g)
                .add(&g.mul(&x.conj()))
                .entries()
                .to_vec(),
            LinearCondition::TraceZero => vec![x.trace()],
            LinearCondition::Annihilates(v) => x.mul_vec(v),
            LinearCondition::RealEntries => x.sub(&x.conj()).entries().to_vec(),
            LinearCondition::Vanishes => x.entries().to_vec(),
            LinearCondition::Custom(f) => f(x),
        }
    }
}

/// Solves a system of homogeneous linear conditions on an `m×m` unknown.
///
/// Over the real structure every entry is split into real and imaginary
/// unknowns and every residual into real and imaginary equations, so
/// conditions may involve `conj(X)`; the result is a real span.
pub fn solve_linear_constraints(
    m: usize,
    conditions: &[LinearCondition],
    over_real_structure: bool,
) -> LieAlgebraBasis {
    let ground = if over_real_structure {
        Ground::Real
    } else {
        Ground::Complex
    };
    let mut units = Vec::new();
    for r in 0..m {
        for c in 0..m {
            let mut e = Matrix::zeros(m, m);
            e.set(r, c, Scalar::one());
            if over_real_structure {
                let mut ie = Matrix::zeros(m, m);
                ie.set(r, c, Scalar::i());
                units.push(e);
                units.push(ie);
            } else {
                units.push(e);
            }
        }
    }
    let span = LieAlgebraBasis {
        ambient_dim: m,
        elements: units,
        ground,
    };
    span.solve_in_span(|x| conditions.iter().flat_map(|c| c.residual(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i() -> Scalar {
        Scalar::i()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(3).rank(), 3);
        assert_eq!(Matrix::zeros(2, 2).rank(), 0);
        let m = Matrix::from_rows(vec![
            vec![Scalar::one(), i()],
            vec![i(), Scalar::from_int(-1)],
        ]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(4).kernel().dim(), 0);
        assert_eq!(Matrix::zeros(2, 3).kernel().dim(), 3);
        let k = Matrix::from_rows(vec![vec![Scalar::one(), i()]]).kernel();
        assert_eq!(k.dim(), 1);
        let expected = Subspace::span(2, &[vec![-i(), Scalar::one()]]);
        assert!(k.column_space_equal(&expected).unwrap());
    }

    #[test]
    fn column_space_examples() {
        let e = |k| unit(3, k);
        let a = Subspace::span(3, &[e(0)]);
        let b = Subspace::span(3, &[vscale(&Scalar::from_int(2), &e(0))]);
        assert!(a.column_space_equal(&b).unwrap());
        assert!(!a.column_space_equal(&Subspace::span(3, &[e(1)])).unwrap());
        let z = vadd(&e(0), &vscale(&i(), &e(1)));
        let c = Subspace::span(3, &[z.clone(), e(2)]);
        let d = Subspace::span(3, &[e(2), vscale(&i(), &z)]);
        assert!(c.column_space_equal(&d).unwrap());
        assert!(a.column_space_equal(&Subspace::zero(2)).is_err());
    }

    #[test]
    fn signature_examples() {
        assert_eq!(
            hermitian_signature(&Matrix::diag_int(&[1, 1, -1])).unwrap(),
            Signature::new(2, 1, 0)
        );
        assert_eq!(
            hermitian_signature(&Matrix::from_int_rows(&[&[0, 1], &[1, 0]])).unwrap(),
            Signature::new(1, 1, 0)
        );
        assert_eq!(
            hermitian_signature(&Matrix::diag_int(&[2, -3, 0])).unwrap(),
            Signature::new(1, 1, 1)
        );
        let not_h = Matrix::from_rows(vec![vec![Scalar::zero(), i()], vec![i(), Scalar::zero()]]);
        assert_eq!(hermitian_signature(&not_h), Err(LinalgError::NotHermitian));
        // purely imaginary off-diagonal needs the conjugate shift
        let h = Matrix::from_rows(vec![vec![Scalar::zero(), i()], vec![-i(), Scalar::zero()]]);
        assert_eq!(hermitian_signature(&h).unwrap(), Signature::new(1, 1, 0));
    }

    #[test]
    fn solver_examples() {
        let anti = solve_linear_constraints(
            3,
            &[LinearCondition::PreservesBilinear(Matrix::identity(3))],
            false,
        );
        assert_eq!(anti.dim(), 3);
        assert_eq!(
            solve_linear_constraints(3, &[LinearCondition::Vanishes], false).dim(),
            0
        );
        let j = Matrix::from_int_rows(&[&[0, 1], &[-1, 0]]);
        let sp2 = solve_linear_constraints(2, &[LinearCondition::PreservesBilinear(j)], false);
        assert_eq!(sp2.dim(), 3);
        assert!(sp2.is_bracket_closed());
    }

    #[test]
    fn det_and_inverse() {
        let m = Matrix::from_int_rows(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.det(), Scalar::one());
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert_eq!(
            Matrix::from_int_rows(&[&[1, 2], &[2, 4]]).inverse(),
            Err(LinalgError::Singular)
        );
    }

    #[test]
    fn intersection_and_annihilator() {
        let e = |k| unit(3, k);
        let a = Subspace::span(3, &[e(0), e(1)]);
        let b = Subspace::span(3, &[e(1), e(2)]);
        let c = a.intersection(&b);
        assert!(c.column_space_equal(&Subspace::span(3, &[e(1)])).unwrap());
        let ann = a.annihilator();
        assert_eq!(ann.rows(), 1);
        assert!(ann.mul(a.basis()).is_zero());
    }
}
