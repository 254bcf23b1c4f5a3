//! Pool one local-similarity buffer with every strategy and show how the
//! deviation family relates: MAD <= SD, the alpha blend walking between them,
//! and the Minkowski orders reproducing both.
//!
//! ```bash
//! cargo run -p deviqa --example pooling_strategies
//! ```

use deviqa::{
    dd_pool_joint, mad_pool, mean_pool, minkowski_deviation_pool, sd_pool, weighted_mean_pool,
    Mct,
};

fn main() {
    // a synthetic LS map: mostly-similar values with a degraded patch
    let mut ls = deviqa::synth::uniform_buffer(10_000, 42);
    for v in ls.iter_mut() {
        *v = 0.9 + 0.1 * *v; // healthy region: similarity near 1
    }
    for v in ls.iter_mut().take(500) {
        *v *= 0.4; // distorted region: similarity collapses
    }

    let mean = mean_pool(&ls).unwrap().value;
    let sd = sd_pool(&ls).unwrap().value;
    let mad = mad_pool(&ls).unwrap().value;
    println!("mean pooling          {mean:.6}   (higher similarity is better)");
    println!("sd pooling            {sd:.6}   (spread of the map; lower is better)");
    println!("mad pooling           {mad:.6}   (more tolerant of the large deviations)");

    // weights emphasizing the degraded patch
    let weights: Vec<f64> = (0..ls.len()).map(|i| if i < 500 { 4.0 } else { 1.0 }).collect();
    let weighted = weighted_mean_pool(&ls, &weights).unwrap().value;
    println!("weighted mean         {weighted:.6}   (patch weighted 4x)");

    println!("\ndouble deviation dd = alpha*sd + (1-alpha)*mad, one sweep for all three:");
    for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let joint = dd_pool_joint(&ls, alpha).unwrap();
        println!("  alpha {alpha:.2}  ->  dd {:.6}", joint.dd.value);
    }

    println!("\ngeneralized minkowski deviation about the mean:");
    for (rho, note) in [(1.0, "  (= mad)"), (2.0, "  (= sd)"), (3.0, ""), (6.0, "")] {
        let v = minkowski_deviation_pool(&ls, rho, Mct::Mean).unwrap().value;
        println!("  rho {rho:.1}  ->  {v:.6}{note}");
    }
    let about_median = minkowski_deviation_pool(&ls, 2.0, Mct::Median).unwrap().value;
    println!("  rho 2.0 about the median -> {about_median:.6}");
}
