//! Seeded sample points shared by the verification routines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polyring::{rat, Rational};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational with small numerator and denominator. Such points are
/// generic for every polynomial condition appearing in this crate while
/// keeping exact arithmetic cheap.
pub fn rational(rng: &mut SampleRng) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-19..=19);
        if n != 0 {
            return rat(n, rng.gen_range(1..=7));
        }
    }
}

pub fn rational_point(rng: &mut SampleRng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rational(rng)).collect()
}

pub fn float_point(rng: &mut SampleRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()
}
