//! Exact scalars: Gaussian rationals extended by a lazily grown tower of
//! real square roots, `Q(i)(√r₁)(√r₂)…(√r_k)`.
//!
//! A [`Scalar`] stores its coordinates over the tower basis
//! `{ Π_{j∈J} √r_j : J ⊆ {1..k} }`, where bit `j-1` of a coordinate index
//! selects `√r_j`. Each radicand `r_j` is a positive real element of the
//! previous level that is not a square there, so coordinates are unique and
//! equality is decided coordinate-wise.
//!
//! Towers are append-only and shared through [`Arc`]; a scalar built in a
//! tower stays valid in every extension of it (its coordinates are padded
//! with zeros when lifted).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar is not real")]
    NotReal,
    #[error("radicand is not positive")]
    NotPositive,
    #[error("radicand is already a square in the tower")]
    RedundantAdjunction,
    #[error("scalars live in incompatible towers")]
    IncompatibleTowers,
    #[error("cannot parse scalar: {0}")]
    Parse(String),
}

/// An element `re + im·i` of `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gaussian { re, im }
    }

    pub fn zero() -> Self {
        Gaussian::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Gaussian::new(BigRational::one(), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -&self.im)
    }

    pub fn add(&self, o: &Self) -> Self {
        Gaussian::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Gaussian::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn neg(&self) -> Self {
        Gaussian::new(-&self.re, -&self.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Gaussian::new(&self.re * &o.re, BigRational::zero());
        }
        Gaussian::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Gaussian::new(&self.re / &n, -&self.im / &n))
    }

    /// A square root in `Q(i)`, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Gaussian::zero());
        }
        if self.im.is_zero() {
            return if self.re.is_positive() {
                rational_sqrt(&self.re).map(|r| Gaussian::new(r, BigRational::zero()))
            } else {
                rational_sqrt(&-&self.re).map(|r| Gaussian::new(BigRational::zero(), r))
            };
        }
        let m = rational_sqrt(&(&self.re * &self.re + &self.im * &self.im))?;
        let two = BigRational::from_integer(BigInt::from(2));
        let x = rational_sqrt(&((&self.re + &m) / &two))?;
        if x.is_zero() {
            return None;
        }
        let y = &self.im / (&two * &x);
        Some(Gaussian::new(x, y))
    }

    fn write_text(&self, out: &mut String) {
        use std::fmt::Write;
        let _ = write!(
            out,
            "{}/{}+{}/{}*i",
            self.re.numer(),
            self.re.denom(),
            self.im.numer(),
            self.im.denom()
        );
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        self.write_text(&mut s);
        s
    }

    /// Parses the `a/b+c/d*i` form produced by [`Gaussian::to_text`].
    pub fn parse(text: &str) -> Result<Self, ScalarError> {
        let err = || ScalarError::Parse(text.to_string());
        let body = text.trim().strip_suffix("*i").ok_or_else(err)?;
        let (re, im) = body.split_once('+').ok_or_else(err)?;
        let frac = |s: &str| -> Result<BigRational, ScalarError> {
            let (n, d) = s.split_once('/').ok_or_else(err)?;
            let n: BigInt = n.parse().map_err(|_| err())?;
            let d: BigInt = d.parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            let q = BigRational::new(n.clone(), d.clone());
            // canonical text only: reduced with positive denominator
            if q.numer() != &n || q.denom() != &d {
                return Err(err());
            }
            Ok(q)
        };
        Ok(Gaussian::new(frac(re)?, frac(im)?))
    }
}

struct Level {
    parent: Tower,
    /// Coordinates of every radicand, bottom-up; entry `j` has `2^j` coordinates.
    radicands: Vec<Vec<Gaussian>>,
}

/// An append-only tower `Q(i)(√r₁)…(√r_k)`.
#[derive(Clone, Default)]
pub struct Tower {
    top: Option<Arc<Level>>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.radicands().iter().map(|s| s.to_string()).collect();
        write!(f, "Tower{r:?}")
    }
}

impl Tower {
    /// The base field `Q(i)`.
    pub fn base() -> Self {
        Tower { top: None }
    }

    pub fn depth(&self) -> usize {
        self.top.as_ref().map_or(0, |l| l.radicands.len())
    }

    fn radicand_coords(&self, level: usize) -> &[Gaussian] {
        &self.top.as_ref().expect("level within tower").radicands[level - 1]
    }

    /// The adjoined radicands, bottom-up, each as a scalar of the level below it.
    pub fn radicands(&self) -> Vec<Scalar> {
        (1..=self.depth())
            .map(|d| Scalar {
                tower: self.ancestor(d - 1),
                coords: self.radicand_coords(d).to_vec(),
            })
            .collect()
    }

    pub fn ancestor(&self, depth: usize) -> Tower {
        let mut t = self.clone();
        while t.depth() > depth {
            let parent = t.top.as_ref().unwrap().parent.clone();
            t = parent;
        }
        t
    }

    fn same_as(&self, other: &Tower) -> bool {
        match (&self.top, &other.top) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b) || a.radicands == b.radicands,
            _ => false,
        }
    }

    /// True iff `self` is `other` or an extension of it.
    pub fn extends(&self, other: &Tower) -> bool {
        other.depth() <= self.depth() && self.ancestor(other.depth()).same_as(other)
    }

    /// The common extension of two compatible towers.
    pub fn join(&self, other: &Tower) -> Result<Tower, ScalarError> {
        if self.extends(other) {
            Ok(self.clone())
        } else if other.extends(self) {
            Ok(other.clone())
        } else {
            Err(ScalarError::IncompatibleTowers)
        }
    }

    /// Re-expresses `x` in this tower.
    pub fn lift(&self, x: &Scalar) -> Result<Scalar, ScalarError> {
        if !self.extends(&x.tower) {
            return Err(ScalarError::IncompatibleTowers);
        }
        let mut coords = x.coords.clone();
        coords.resize(1 << self.depth(), Gaussian::zero());
        Ok(Scalar {
            tower: self.clone(),
            coords,
        })
    }

    /// Adjoins `√r`. Refuses non-real, non-positive, and square radicands.
    pub fn adjoin_sqrt(&self, r: &Scalar) -> Result<Tower, ScalarError> {
        let r = self.lift(r)?;
        if r.sign()? <= 0 {
            return Err(ScalarError::NotPositive);
        }
        if sqrt_rec(self, self.depth(), &r.coords).is_some() {
            return Err(ScalarError::RedundantAdjunction);
        }
        let mut radicands = self
            .top
            .as_ref()
            .map_or_else(Vec::new, |l| l.radicands.clone());
        radicands.push(r.coords);
        Ok(Tower {
            top: Some(Arc::new(Level {
                parent: self.clone(),
                radicands,
            })),
        })
    }

    /// A square root of `x`, adjoining one to the tower when `x` is a
    /// positive real non-square. Returns the (possibly extended) tower.
    pub fn sqrt(&self, x: &Scalar) -> Result<(Tower, Scalar), ScalarError> {
        let x = self.lift(x)?;
        if let Some(c) = sqrt_rec(self, self.depth(), &x.coords) {
            return Ok((self.clone(), Scalar::from_parts(self.clone(), c)));
        }
        let t = self.adjoin_sqrt(&x)?;
        let mut coords = vec![Gaussian::zero(); 1 << t.depth()];
        coords[1 << self.depth()] = Gaussian::one();
        Ok((t.clone(), Scalar::from_parts(t, coords)))
    }

    /// Builds a tower by adjoining the given radicands in order.
    pub fn from_radicands(radicands: &[Scalar]) -> Result<Tower, ScalarError> {
        let mut t = Tower::base();
        for r in radicands {
            t = t.adjoin_sqrt(r)?;
        }
        Ok(t)
    }
}

fn all_zero(v: &[Gaussian]) -> bool {
    v.iter().all(Gaussian::is_zero)
}

fn add_vec(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn sub_vec(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn mul_rec(t: &Tower, depth: usize, a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    if depth == 0 {
        return vec![a[0].mul(&b[0])];
    }
    let h = a.len() / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let a1z = all_zero(a1);
    let b1z = all_zero(b1);
    let (c0, c1) = match (a1z, b1z) {
        (true, true) => (mul_rec(t, depth - 1, a0, b0), vec![Gaussian::zero(); h]),
        (true, false) => (mul_rec(t, depth - 1, a0, b0), mul_rec(t, depth - 1, a0, b1)),
        (false, true) => (mul_rec(t, depth - 1, a0, b0), mul_rec(t, depth - 1, a1, b0)),
        (false, false) => {
            let r = t.radicand_coords(depth);
            let a1b1 = mul_rec(t, depth - 1, a1, b1);
            let c0 = add_vec(
                &mul_rec(t, depth - 1, a0, b0),
                &mul_rec(t, depth - 1, r, &a1b1),
            );
            let c1 = add_vec(
                &mul_rec(t, depth - 1, a0, b1),
                &mul_rec(t, depth - 1, a1, b0),
            );
            (c0, c1)
        }
    };
    let mut out = c0;
    out.extend(c1);
    out
}

fn inv_rec(t: &Tower, depth: usize, a: &[Gaussian]) -> Option<Vec<Gaussian>> {
    if depth == 0 {
        return a[0].inv().map(|x| vec![x]);
    }
    let h = a.len() / 2;
    let (a0, a1) = a.split_at(h);
    if all_zero(a1) {
        let mut out = inv_rec(t, depth - 1, a0)?;
        out.resize(2 * h, Gaussian::zero());
        return Some(out);
    }
    let r = t.radicand_coords(depth);
    let a1sq = mul_rec(t, depth - 1, a1, a1);
    let norm = sub_vec(
        &mul_rec(t, depth - 1, a0, a0),
        &mul_rec(t, depth - 1, r, &a1sq),
    );
    let ni = inv_rec(t, depth - 1, &norm)?;
    let mut out = mul_rec(t, depth - 1, a0, &ni);
    out.extend(mul_rec(t, depth - 1, a1, &ni).iter().map(Gaussian::neg));
    Some(out)
}

/// Sign of a real element (all coordinates real).
fn sign_rec(t: &Tower, depth: usize, a: &[Gaussian]) -> i8 {
    if depth == 0 {
        let re = &a[0].re;
        return if re.is_positive() {
            1
        } else if re.is_negative() {
            -1
        } else {
            0
        };
    }
    let h = a.len() / 2;
    let (a0, a1) = a.split_at(h);
    let s0 = sign_rec(t, depth - 1, a0);
    let s1 = sign_rec(t, depth - 1, a1);
    if s1 == 0 || s0 == s1 {
        return if s0 == 0 { s1 } else { s0 };
    }
    if s0 == 0 {
        return s1;
    }
    // opposite signs: compare a0² with r·a1²
    let r = t.radicand_coords(depth);
    let a1sq = mul_rec(t, depth - 1, a1, a1);
    let d = sub_vec(
        &mul_rec(t, depth - 1, a0, a0),
        &mul_rec(t, depth - 1, r, &a1sq),
    );
    if sign_rec(t, depth - 1, &d) > 0 {
        s0
    } else {
        s1
    }
}

fn scale_vec(a: &[Gaussian], q: &BigRational) -> Vec<Gaussian> {
    a.iter()
        .map(|g| Gaussian::new(&g.re * q, &g.im * q))
        .collect()
}

fn sqrt_rec(t: &Tower, depth: usize, a: &[Gaussian]) -> Option<Vec<Gaussian>> {
    if depth == 0 {
        return a[0].sqrt().map(|x| vec![x]);
    }
    let h = a.len() / 2;
    let (a0, a1) = a.split_at(h);
    let zeros = || vec![Gaussian::zero(); h];
    if all_zero(a1) {
        if let Some(s) = sqrt_rec(t, depth - 1, a0) {
            let mut out = s;
            out.extend(zeros());
            return Some(out);
        }
        // a0 = r·s² gives (s√r)² = a0
        let r = t.radicand_coords(depth);
        let q = mul_rec(t, depth - 1, a0, &inv_rec(t, depth - 1, r)?);
        let s = sqrt_rec(t, depth - 1, &q)?;
        let mut out = zeros();
        out.extend(s);
        return Some(out);
    }
    // (x + y√r)² = a0 + a1√r  ⇒  x² = (a0 ± √(a0² − r·a1²)) / 2, y = a1 / 2x
    let r = t.radicand_coords(depth);
    let a1sq = mul_rec(t, depth - 1, a1, a1);
    let disc = sub_vec(
        &mul_rec(t, depth - 1, a0, a0),
        &mul_rec(t, depth - 1, r, &a1sq),
    );
    let m = sqrt_rec(t, depth - 1, &disc)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for cand in [add_vec(a0, &m), sub_vec(a0, &m)] {
        let x2 = scale_vec(&cand, &half);
        if let Some(x) = sqrt_rec(t, depth - 1, &x2) {
            if all_zero(&x) {
                continue;
            }
            let xi = inv_rec(t, depth - 1, &x)?;
            let y = scale_vec(&mul_rec(t, depth - 1, a1, &xi), &half);
            let mut out = x;
            out.extend(y);
            if mul_rec(t, depth, &out, &out) == a {
                return Some(out);
            }
        }
    }
    None
}

/// An exact element of a real-quadratic tower over `Q(i)`.
#[derive(Clone)]
pub struct Scalar {
    tower: Tower,
    coords: Vec<Gaussian>,
}

impl Scalar {
    fn from_parts(tower: Tower, coords: Vec<Gaussian>) -> Self {
        debug_assert_eq!(coords.len(), 1 << tower.depth());
        Scalar { tower, coords }.trimmed()
    }

    /// Drops top levels whose coordinates vanish, so values that live in a
    /// smaller field are stored (and multiplied) there.
    fn trimmed(mut self) -> Self {
        while self.tower.depth() > 0 {
            let h = self.coords.len() / 2;
            if !all_zero(&self.coords[h..]) {
                break;
            }
            self.coords.truncate(h);
            self.tower = self.tower.ancestor(self.tower.depth() - 1);
        }
        self
    }

    pub fn from_gaussian(g: Gaussian) -> Self {
        Scalar {
            tower: Tower::base(),
            coords: vec![g],
        }
    }

    /// Builds a scalar in `tower` from coordinates over its basis.
    pub fn from_coords(tower: &Tower, coords: Vec<Gaussian>) -> Result<Self, ScalarError> {
        if coords.len() != 1 << tower.depth() {
            return Err(ScalarError::Parse(format!(
                "expected {} coordinates, found {}",
                1 << tower.depth(),
                coords.len()
            )));
        }
        Ok(Scalar::from_parts(tower.clone(), coords))
    }

    pub fn zero() -> Self {
        Scalar::from_gaussian(Gaussian::zero())
    }

    pub fn one() -> Self {
        Scalar::from_gaussian(Gaussian::one())
    }

    pub fn i() -> Self {
        Scalar::from_gaussian(Gaussian::new(BigRational::zero(), BigRational::one()))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_gaussian(Gaussian::new(
            BigRational::from_integer(n.into()),
            BigRational::zero(),
        ))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar::from_gaussian(Gaussian::new(q, BigRational::zero()))
    }

    /// `re + im·i` with integer parts.
    pub fn gaussian_int(re: i64, im: i64) -> Self {
        Scalar::from_gaussian(Gaussian::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        ))
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn coords(&self) -> &[Gaussian] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        all_zero(&self.coords)
    }

    pub fn is_one(&self) -> bool {
        self.coords.len() == 1 && self.coords[0] == Gaussian::one()
    }

    /// Complex conjugation `i ↦ -i`; the radicands are real, so it acts
    /// coordinate-wise.
    pub fn conj(&self) -> Self {
        Scalar {
            tower: self.tower.clone(),
            coords: self.coords.iter().map(Gaussian::conj).collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.coords.iter().all(Gaussian::is_real)
    }

    /// `(z + conj z) / 2`.
    pub fn re(&self) -> Self {
        Scalar {
            tower: self.tower.clone(),
            coords: self
                .coords
                .iter()
                .map(|g| Gaussian::new(g.re.clone(), BigRational::zero()))
                .collect(),
        }
        .trimmed()
    }

    /// `(z - conj z) / 2i`.
    pub fn im(&self) -> Self {
        Scalar {
            tower: self.tower.clone(),
            coords: self
                .coords
                .iter()
                .map(|g| Gaussian::new(g.im.clone(), BigRational::zero()))
                .collect(),
        }
        .trimmed()
    }

    /// Sign of a real scalar: -1, 0 or 1.
    pub fn sign(&self) -> Result<i8, ScalarError> {
        if !self.is_real() {
            return Err(ScalarError::NotReal);
        }
        Ok(sign_rec(&self.tower, self.tower.depth(), &self.coords))
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        inv_rec(&self.tower, self.tower.depth(), &self.coords)
            .map(|c| Scalar::from_parts(self.tower.clone(), c))
            .ok_or(ScalarError::DivisionByZero)
    }

    /// A square root within the scalar's own tower, if one exists.
    pub fn try_sqrt(&self) -> Option<Self> {
        sqrt_rec(&self.tower, self.tower.depth(), &self.coords)
            .map(|c| Scalar::from_parts(self.tower.clone(), c))
    }

    /// The rational value, when the scalar is one.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.coords.len() == 1 && self.coords[0].is_real()).then(|| &self.coords[0].re)
    }

    /// The Gaussian-rational value, when the scalar lies in `Q(i)`.
    pub fn as_gaussian(&self) -> Option<&Gaussian> {
        (self.coords.len() == 1).then(|| &self.coords[0])
    }

    fn binary(
        &self,
        other: &Scalar,
        op: impl FnOnce(&Tower, &[Gaussian], &[Gaussian]) -> Vec<Gaussian>,
    ) -> Scalar {
        if self.tower.depth() == other.tower.depth() && self.tower.same_as(&other.tower) {
            let c = op(&self.tower, &self.coords, &other.coords);
            return Scalar::from_parts(self.tower.clone(), c);
        }
        let t = self
            .tower
            .join(&other.tower)
            .expect("scalars from incompatible towers");
        let a = t.lift(self).unwrap();
        let b = t.lift(other).unwrap();
        let c = op(&t, &a.coords, &b.coords);
        Scalar::from_parts(t, c)
    }

    /// Canonical text: `a/b+c/d*i` in `Q(i)`, otherwise a JSON object
    /// `{"radicands":[…],"coords":[…]}`.
    pub fn to_text(&self) -> String {
        if self.tower.depth() == 0 {
            return self.coords[0].to_text();
        }
        serde_json::to_string(&crate::serial::scalar_to_json(self)).expect("json")
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.tower.depth() == other.tower.depth() && self.tower.same_as(&other.tower) {
            return self.coords == other.coords;
        }
        match self.tower.join(&other.tower) {
            Ok(t) => t.lift(self).unwrap().coords == t.lift(other).unwrap().coords,
            Err(_) => false,
        }
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        self.binary(rhs, |_, a, b| add_vec(a, b))
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        if rhs.is_zero() {
            return self.clone();
        }
        self.binary(rhs, |_, a, b| sub_vec(a, b))
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        self.binary(rhs, |t, a, b| mul_rec(t, t.depth(), a, b))
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'a Scalar) -> Scalar {
        if rhs.is_one() {
            return self.clone();
        }
        let inv = rhs.inv().expect("division by zero");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            tower: self.tower.clone(),
            coords: self.coords.iter().map(Gaussian::neg).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul, Div div);
