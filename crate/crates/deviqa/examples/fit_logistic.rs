//! The nonlinear mapping behind the PCC/RMSE columns: fit the 4-parameter
//! logistic to (objective score, subjective score) points and inspect the
//! recovered curve.
//!
//! ```bash
//! cargo run -p deviqa --example fit_logistic
//! ```

use deviqa::synth::SplitMix64;
use deviqa::{fit_logistic, pearson, rmse, LogisticParams};

fn main() {
    // synthesize ratings from a known curve plus observer noise
    let truth = LogisticParams {
        beta1: 90.0,
        beta2: 5.0,
        beta3: 0.35,
        beta4: 0.12,
        converged: true,
        iterations: 0,
    };
    let mut rng = SplitMix64::new(2024);
    let objective: Vec<f64> = (0..60).map(|i| i as f64 / 60.0).collect();
    let mos: Vec<f64> = objective
        .iter()
        .map(|&s| truth.predict(s) + 2.0 * rng.next_gaussian())
        .collect();

    let fit = fit_logistic(&objective, &mos).unwrap();
    println!("generator: beta = [90, 5, 0.35, 0.12]");
    println!(
        "fitted:    beta = [{:.3}, {:.3}, {:.3}, {:.3}]  converged = {}  iterations = {}",
        fit.beta1, fit.beta2, fit.beta3, fit.beta4, fit.converged, fit.iterations
    );

    let mapped: Vec<f64> = objective.iter().map(|&s| fit.predict(s)).collect();
    println!("\nraw pearson     {:.4}", pearson(&objective, &mos).unwrap());
    println!("mapped pearson  {:.4}", pearson(&mapped, &mos).unwrap());
    println!("mapped rmse     {:.4} (noise sigma was 2.0)", rmse(&mapped, &mos).unwrap());

    println!("\n{:>6} {:>10} {:>10}", "s", "mos", "mapped");
    for i in (0..objective.len()).step_by(10) {
        println!("{:6.2} {:10.3} {:10.3}", objective[i], mos[i], mapped[i]);
    }
}
