//! Deterministic synthetic fixtures: a tiny seeded generator, uniform
//! benchmark buffers, checkerboard test images and seeded Gaussian noise.
//!
//! Everything here is reproducible from its seed, which the benchmark command
//! and the test fixtures rely on.

use crate::error::Result;
use crate::raster::GrayImage;

/// SplitMix64: small, fast and stable across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller.
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_f64().max(f64::MIN_POSITIVE);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Seeded uniform `[0, 1)` buffer, e.g. a stand-in local-similarity map for
/// pooling benchmarks.
pub fn uniform_buffer(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed);
    (0..len).map(|_| rng.next_f64()).collect()
}

/// Checkerboard of `tile`-sized squares alternating between `low` and `high`.
pub fn checkerboard(width: usize, height: usize, tile: usize, low: f64, high: f64) -> Result<GrayImage> {
    let tile = tile.max(1);
    GrayImage::from_fn(width, height, |x, y| {
        if ((x / tile) + (y / tile)).is_multiple_of(2) {
            low
        } else {
            high
        }
    })
}

/// Adds zero-mean Gaussian noise of the given sigma, clamping back to
/// `[0, 255]`. A fixed seed yields the same underlying unit draws for every
/// sigma, so increasing sigma strictly scales the same noise field.
pub fn add_gaussian_noise(img: &GrayImage, sigma: f64, seed: u64) -> GrayImage {
    assert!(sigma.is_finite(), "noise sigma must be finite, got {sigma}");
    let mut rng = SplitMix64::new(seed);
    img.map(|v| (v + sigma * rng.next_gaussian()).clamp(0.0, 255.0))
        .expect("clamped samples are finite")
}
