//! Build each local-similarity map from a synthetic (reference, distorted)
//! pair and look at its distribution before any pooling happens.
//!
//! ```bash
//! cargo run -p deviqa --example similarity_maps
//! ```

use deviqa::synth::{add_gaussian_noise, checkerboard};
use deviqa::{gms_map, mean_pool, mse_map, sd_pool, ssim_map, GmsParams, ScalarField, SsimParams};

fn describe(name: &str, map: &ScalarField) {
    let data = map.data();
    let min = data.iter().copied().fold(f64::INFINITY, f64::min);
    let max = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = mean_pool(data).unwrap().value;
    let sd = sd_pool(data).unwrap().value;
    println!("{name:10} {}x{}  min {min:9.4}  max {max:9.4}  mean {mean:9.4}  sd {sd:9.4}", map.width(), map.height());
}

fn main() {
    let reference = checkerboard(128, 128, 16, 64.0, 192.0).unwrap();
    let distorted = add_gaussian_noise(&reference, 12.0, 7);

    println!("per-pixel local-similarity maps for a 128x128 pair (noise sigma 12):\n");
    let gms = gms_map(&reference, &distorted, &GmsParams::default()).unwrap();
    let mse = mse_map(&reference, &distorted).unwrap();
    let ssim = ssim_map(&reference, &distorted, &SsimParams::default()).unwrap();
    describe("gms", &gms);
    describe("mse", &mse);
    describe("ssim", &ssim);

    println!("\nthe same maps for the undistorted pair (identical inputs):\n");
    let gms = gms_map(&reference, &reference, &GmsParams::default()).unwrap();
    let mse = mse_map(&reference, &reference).unwrap();
    let ssim = ssim_map(&reference, &reference, &SsimParams::default()).unwrap();
    describe("gms", &gms);
    describe("mse", &mse);
    describe("ssim", &ssim);
    println!("\nidentical inputs give gms = ssim = 1 and mse = 0 everywhere, so every");
    println!("deviation pooling of them is exactly 0.");
}
