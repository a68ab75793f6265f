//! Seeded random streams.
//!
//! Every consumer draws from its own ChaCha20 stream keyed by `(seed, purpose)`, so adding a
//! new consumer never shifts the numbers an existing one sees.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Identifier recorded in run metadata.
pub const RNG_ALGORITHM: &str = "chacha20/rand_chacha-0.9/seed_from_u64+stream";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Noise = 1,
    SamplingPoints = 2,
    MuSample = 3,
    ArcsineSample = 4,
    Experiment = 5,
}

pub fn stream(seed: u64, purpose: Purpose) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(purpose as u64);
    rng
}
