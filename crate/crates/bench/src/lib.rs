//! Seeded inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistspec_core::{BandedMatrix, Complex64, PointCloud};

/// Tridiagonal matrix with entries uniform on the square `[-1, 1]^2`.
pub fn random_tridiagonal(n: usize, seed: u64) -> BandedMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = BandedMatrix::zeros(n, 1, 1);
    for off in -1isize..=1 {
        for v in m.diagonal_mut(off) {
            *v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    m
}

/// Cloud of `n` points uniform on the unit square.
pub fn random_cloud(n: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointCloud::new((0..n).map(|_| Complex64::new(rng.random(), rng.random())).collect())
}
