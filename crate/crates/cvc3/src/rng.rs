//! Seeded deterministic sampling.
//!
//! A tiny splitmix64 generator keeps sampled oracles and reports byte-stable
//! across runs and platforms, independent of any external RNG crate.

use crate::linalg::{Mat3, Vec3};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform on the unit sphere, by rejection from the cube.
    pub fn unit_vector(&mut self) -> Vec3 {
        loop {
            let v = Vec3::new(
                self.range(-1.0, 1.0),
                self.range(-1.0, 1.0),
                self.range(-1.0, 1.0),
            );
            let n2 = v.norm_squared();
            if n2 > 1e-4 && n2 <= 1.0 {
                return v / n2.sqrt();
            }
        }
    }

    /// Uniform on the unit sphere of R^4.
    pub fn unit_vector4(&mut self) -> [f64; 4] {
        loop {
            let v = [
                self.range(-1.0, 1.0),
                self.range(-1.0, 1.0),
                self.range(-1.0, 1.0),
                self.range(-1.0, 1.0),
            ];
            let n2: f64 = v.iter().map(|x| x * x).sum();
            if n2 > 1e-4 && n2 <= 1.0 {
                let n = n2.sqrt();
                return [v[0] / n, v[1] / n, v[2] / n, v[3] / n];
            }
        }
    }

    /// Random rotation built from three random axis angles.
    pub fn rotation(&mut self) -> Mat3 {
        let axis = self.unit_vector();
        let angle = self.range(0.0, std::f64::consts::TAU);
        nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle)
            .into_inner()
    }

    /// Random symmetric positive definite matrix with O(1) entries.
    pub fn spd_matrix(&mut self) -> Mat3 {
        let mut b = Mat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                b[(i, j)] = self.range(-1.0, 1.0);
            }
        }
        b * b.transpose() + Mat3::identity() * 0.2
    }
}
