//! Randomness primitives: the seeded generator, Bernoulli and geometric draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Counter-based generator owned by each sampler or stream.
pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `true` with probability `r`.
#[inline]
pub fn sample_bernoulli<R: Rng + ?Sized>(r: f64, rng: &mut R) -> bool {
    rng.gen::<f64>() < r
}

/// Draws `K >= 0` with `P(K = k) = (1 - r) r^k` by inversion.
pub fn sample_geometric<R: Rng + ?Sized>(r: f64, rng: &mut R) -> Result<u64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("geometric parameter {r} outside [0, 1)")));
    }
    if r == 0.0 {
        return Ok(0);
    }
    let u: f64 = rng.gen();
    // ln(1 - u) / ln(r), both logarithms negative
    let k = ((-u).ln_1p() / r.ln()).floor();
    Ok(if k >= u64::MAX as f64 { u64::MAX } else { k as u64 })
}
