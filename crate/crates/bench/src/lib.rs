//! Fixtures shared by the criterion benchmarks.

use flagcert_core::forms::StandardModel;
use flagcert_core::linalg::{Matrix, Subspace, Vector};
use flagcert_core::sampling::{self, SeededRng};
use flagcert_core::Scalar;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

/// A dense `n×n` matrix with Gaussian-integer entries in `[−5, 5]`.
pub fn gaussian_matrix(n: usize, seed: u64) -> Matrix {
    let mut r = rng(seed);
    Matrix::from_fn(n, n, |_, _| {
        Scalar::gaussian_int(r.random_range(-5..=5), r.random_range(-5..=5))
    })
}

/// Two positive lines of the split model.
pub fn positive_pair(n: usize, seed: u64) -> (StandardModel, Vector, Vector) {
    let m = StandardModel::projective_split(n).expect("n >= 1");
    let (z, zt) = sampling::same_sign_pair(&m, &mut rng(seed), 5, 1);
    (m, z, zt)
}

/// A scrambled plane of open-orbit signature.
pub fn real_plane(p: usize, q: usize, seed: u64) -> (StandardModel, Subspace) {
    let m = StandardModel::isotropic((p + q).div_ceil(2), p, q).expect("p + q odd");
    let s = sampling::scrambled_real_plane(&m, &mut rng(seed), 3).expect("sampling");
    (m, s)
}
