//! Small self-contained PRNG so that seeded runs replay bit-for-bit on every
//! platform and toolchain.

use crate::point::Point;

/// SplitMix64 generator (Steele, Lea, Flood 2014 mixing constants).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Derive an independent stream for (seed, index) pairs, used to make
    /// per-sample work order-independent.
    pub fn derive(seed: u64, index: u64) -> Self {
        let mut r = SplitMix64::new(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        r.next_u64();
        r
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn usize_below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// Standard normal via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = loop {
            let u = self.next_f64();
            if u > 0.0 {
                break u;
            }
        };
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Uniform in the closed ball `B(center, radius)`, by rejection from the
    /// bounding cube.
    pub fn uniform_in_ball(&mut self, center: &Point, radius: f64) -> Point {
        let d = center.dim();
        loop {
            let v: Vec<f64> = (0..d).map(|_| self.uniform(-1.0, 1.0)).collect();
            let n2: f64 = v.iter().map(|x| x * x).sum();
            if n2 <= 1.0 {
                let coords = center
                    .coords()
                    .iter()
                    .zip(&v)
                    .map(|(c, x)| c + radius * x)
                    .collect();
                return Point::from_vec(coords);
            }
        }
    }

    /// Uniform on the sphere `{x : ||x - center|| = radius}`.
    pub fn uniform_on_sphere(&mut self, center: &Point, radius: f64) -> Point {
        let d = center.dim();
        loop {
            let v: Vec<f64> = (0..d).map(|_| self.gaussian()).collect();
            let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-12 {
                let coords = center
                    .coords()
                    .iter()
                    .zip(&v)
                    .map(|(c, x)| c + radius * x / n)
                    .collect();
                return Point::from_vec(coords);
            }
        }
    }
}
