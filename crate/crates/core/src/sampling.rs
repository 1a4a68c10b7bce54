//! Seeded inputs for witness and orbit checks. Every generator draws from a
//! caller-owned `ChaCha8Rng`, so a seed fixes the whole input stream.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::forms::{e_pq, FormSpec, StandardModel};
use crate::linalg::{is_zero_vec, Matrix, Subspace, Vector};
use crate::scalar::Scalar;
use crate::witnesses::{random_isometry, WitnessError};

/// The generator behind every seeded computation in the crate.
pub type SeededRng = ChaCha8Rng;

/// A nonzero vector with Gaussian-integer entries in `[−bound, bound]`.
pub fn gaussian_vector(rng: &mut impl Rng, dim: usize, bound: i64) -> Vector {
    let bound = bound.max(1);
    loop {
        let v: Vector = (0..dim)
            .map(|_| {
                Scalar::gaussian_int(
                    rng.random_range(-bound..=bound),
                    rng.random_range(-bound..=bound),
                )
            })
            .collect();
        if !is_zero_vec(&v) {
            return v;
        }
    }
}

/// A vector whose `h`-norm has sign `sign` (±1).
pub fn line_of_sign(m: &StandardModel, rng: &mut impl Rng, bound: i64, sign: i8) -> Vector {
    loop {
        let z = gaussian_vector(rng, m.dim(), bound);
        if m.h().norm(&z).sign().ok() == Some(sign) {
            return z;
        }
    }
}

/// Two lines of the same `h`-sign.
pub fn same_sign_pair(
    m: &StandardModel,
    rng: &mut impl Rng,
    bound: i64,
    sign: i8,
) -> (Vector, Vector) {
    let z = line_of_sign(m, rng, bound, sign);
    let zt = line_of_sign(m, rng, bound, sign);
    (z, zt)
}

/// The complex normal form moved by four reflections of `V = e₂ₙ^⊥`, so an
/// element of `SO₂ₙ₋₁(C)` with Gaussian-rational entries.
pub fn scrambled_complex_plane(
    m: &StandardModel,
    rng: &mut impl Rng,
    bound: i64,
) -> Result<Subspace, WitnessError> {
    let n = m.n();
    let v = FormSpec::standard(2 * n - 1);
    let g = random_isometry(&v, rng, bound.max(1), 4, false)?
        .embed(2 * n, &(0..2 * n - 1).collect::<Vec<_>>());
    Ok(m.normal_form_complex()?.apply(&g))
}

/// An element of `SO(p,q)` in model coordinates: four real reflections in
/// signature coordinates, conjugated back.
pub fn random_so_pq_element(
    m: &StandardModel,
    rng: &mut impl Rng,
    bound: i64,
) -> Result<Matrix, WitnessError> {
    let crate::forms::ModelCase::Isotropic { n, p, q } = m.case() else {
        return Err(WitnessError::WrongModel("isotropic"));
    };
    let v = FormSpec::symmetric(e_pq(p, q))?;
    let gy = random_isometry(&v, rng, bound.max(1), 4, true)?
        .embed(2 * n, &(0..2 * n - 1).collect::<Vec<_>>());
    let d = m.signature_change()?;
    Ok(d.mul(&gy).mul(&d.inverse()?))
}

/// The real normal form moved by [`random_so_pq_element`].
pub fn scrambled_real_plane(
    m: &StandardModel,
    rng: &mut impl Rng,
    bound: i64,
) -> Result<Subspace, WitnessError> {
    let g = random_so_pq_element(m, rng, bound)?;
    Ok(m.normal_form_real()?.apply(&g))
}
