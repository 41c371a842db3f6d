//! Deterministic pseudorandom inputs for unit tests.

use num_complex::Complex64;

use crate::xalg::{CMat, CVec, Mat4, Vec4, Vec6};

pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 * 2.0 - 1.0
    }

    pub fn complex(&mut self) -> Complex64 {
        Complex64::new(self.next_f64(), self.next_f64())
    }

    pub fn cvec4(&mut self) -> Vec4 {
        CVec(core::array::from_fn(|_| self.complex()))
    }

    pub fn cvec6(&mut self) -> Vec6 {
        CVec(core::array::from_fn(|_| self.complex()))
    }

    pub fn cmat4(&mut self) -> Mat4 {
        CMat(core::array::from_fn(|_| core::array::from_fn(|_| self.complex())))
    }
}
