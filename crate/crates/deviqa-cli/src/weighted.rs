//! Weighted cross-dataset averaging of evaluation reports: SRC and PCC are
//! combined as `sum(w_i * v_i) / sum(w_i)`, with dataset image counts as the
//! customary weights.

use std::path::PathBuf;

use serde::Deserialize;

use crate::CliError;

#[derive(Deserialize)]
struct ReportStats {
    src: f64,
    pcc: f64,
}

pub fn run(reports: &[PathBuf], weights: &[f64]) -> Result<(), CliError> {
    if reports.len() != weights.len() {
        return Err(CliError::Usage(format!(
            "{} reports but {} weights",
            reports.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
        return Err(CliError::Usage("weights must be positive".to_string()));
    }

    let mut wsum = 0.0;
    let mut src_acc = 0.0;
    let mut pcc_acc = 0.0;
    for (path, &w) in reports.iter().zip(weights) {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Runtime(format!("reading {}: {e}", path.display())))?;
        // a null/missing src or pcc cannot be averaged; fail loudly
        let stats: ReportStats = serde_json::from_str(&text)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        wsum += w;
        src_acc += w * stats.src;
        pcc_acc += w * stats.pcc;
    }
    println!("weighted_src {}", src_acc / wsum);
    println!("weighted_pcc {}", pcc_acc / wsum);
    Ok(())
}
