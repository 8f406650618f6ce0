//! Reproducible per-path random streams.
//!
//! Every path draws from its own ChaCha8 stream. The key is mixed from the
//! run seed and a purpose tag; the stream number is the path index, so a
//! path's numbers do not depend on which thread runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::Vec3;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for a (run seed, purpose tag) pair.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    mix64(mix64(seed) ^ tag.rotate_left(17))
}

pub fn path_rng(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, tag));
    rng.set_stream(index);
    rng
}

/// Brownian increment N(0, dt·Id).
pub fn gaussian_increment(rng: &mut ChaCha8Rng, dt: f64) -> Vec3 {
    let s = dt.sqrt();
    Vec3::from_fn(|_, _| {
        let z: f64 = StandardNormal.sample(rng);
        z * s
    })
}
