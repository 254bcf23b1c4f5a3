//! Build a small rated dataset on disk (one reference, twenty noise levels),
//! write its manifest, and run the full evaluation protocol: raw-score
//! Spearman correlation plus logistic-mapped Pearson/RMSE.
//!
//! ```bash
//! cargo run -p deviqa --example evaluate_dataset
//! ```

use deviqa::dataset::{evaluate_dataset, DatasetManifest};
use deviqa::raster::save_gray;
use deviqa::synth::{add_gaussian_noise, checkerboard};
use deviqa::{find_index, Polarity};

fn main() {
    let dir = std::env::temp_dir().join("deviqa-example-dataset");
    std::fs::create_dir_all(&dir).expect("create working directory");

    // materialize the images and the manifest
    let base = checkerboard(96, 96, 12, 64.0, 192.0).unwrap();
    save_gray(&base, &dir.join("ref.png")).unwrap();
    let mut csv = String::from("ref,dist,mos,tag\n");
    for level in 1..=20 {
        let sigma = 2.0 * level as f64;
        let name = format!("noise{level:02}.png");
        save_gray(&add_gaussian_noise(&base, sigma, 1234), &dir.join(&name)).unwrap();
        // pretend subjective quality drops linearly with sigma
        csv.push_str(&format!("ref.png,{name},{},gaussian-noise\n", 100.0 - sigma));
    }
    let manifest_path = dir.join("manifest.csv");
    std::fs::write(&manifest_path, &csv).unwrap();
    println!("dataset written to {}\n", dir.display());

    let (manifest, malformed) =
        DatasetManifest::from_csv_path(&manifest_path, Polarity::HigherIsBetter).unwrap();
    assert!(malformed.is_empty());

    for name in ["gmsd", "gms-mad", "gms-dd", "ssim", "mse"] {
        let report = evaluate_dataset(&manifest, &find_index(name).unwrap()).unwrap();
        println!(
            "{:8} SRC {:.4}  PCC {:.4}  RMSE {:.4}  (entries {}, excluded {}, fit converged: {})",
            report.index_name,
            report.src,
            report.pcc,
            report.rmse,
            report.entries.len(),
            report.excluded.len(),
            report.logistic.converged,
        );
    }

    // the full report also carries per-entry scores, exclusions and the
    // per-distortion SRC table; persist one for inspection
    let report = evaluate_dataset(&manifest, &find_index("gmsd").unwrap()).unwrap();
    let report_path = dir.join("gmsd-report.json");
    std::fs::write(&report_path, report.to_json()).unwrap();
    println!("\nfull gmsd report written to {}", report_path.display());
}
