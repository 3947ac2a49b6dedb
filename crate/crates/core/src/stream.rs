//! Per-member random streams.
//!
//! Every ensemble member `i` of a run seeded with `seed` reads from ChaCha8
//! keyed by `seed` on stream `i`. The draws of one member never depend on how
//! many other members exist or on the order in which members are evaluated.

use core::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// All member streams of one seed.
#[derive(Debug, Clone)]
pub struct StreamFamily {
    base: ChaCha8Rng,
}

impl StreamFamily {
    pub fn new(seed: u64) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn member(&self, member: u64) -> MemberStream {
        let mut rng = self.base.clone();
        rng.set_stream(member);
        MemberStream { rng }
    }
}

#[derive(Debug, Clone)]
pub struct MemberStream {
    rng: ChaCha8Rng,
}

impl MemberStream {
    pub fn new(seed: u64, member: u64) -> Self {
        StreamFamily::new(seed).member(member)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform angle in `[0, 2π)`.
    pub fn angle(&mut self) -> f64 {
        let a = self.uniform() * TAU;
        if a >= TAU {
            0.0
        } else {
            a
        }
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        // Lemire's multiply-shift with rejection
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.rng.next_u64();
            let m = (x as u128) * (n as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }
}
