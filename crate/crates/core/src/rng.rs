//! Seeded generator for randomized sweeps.
//!
//! 64-bit linear congruential generator with Knuth's MMIX constants:
//! `s ← 6364136223846793005·s + 1442695040888963407 (mod 2⁶⁴)`; uniform
//! doubles take the top 53 bits. Kept in-crate so the documented sequence
//! cannot change underneath a pinned config.

use std::f64::consts::TAU;

use num_complex::Complex64;

const MULTIPLIER: u64 = 6_364_136_223_846_793_005;
const INCREMENT: u64 = 1_442_695_040_888_963_407;

#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn angle(&mut self) -> f64 {
        TAU * self.next_f64()
    }

    pub fn boundary_point(&mut self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle())
    }

    /// Point with modulus uniform in `[0, r_max]` and uniform argument.
    pub fn disk_point(&mut self, r_max: f64) -> Complex64 {
        let r = r_max * self.next_f64();
        Complex64::from_polar(r, self.angle())
    }
}
