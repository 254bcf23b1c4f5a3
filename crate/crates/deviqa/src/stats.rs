//! Correlation and error measures used by the dataset evaluation protocol:
//! Spearman rank correlation (average ranks for ties), Pearson linear
//! correlation and root mean square error.

use crate::error::{Error, Result};
use crate::sum;

/// 1-based fractional ranks; tied values receive the average of their ranks.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 averaged
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            ranks[order[k]] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "correlation inputs differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::invalid("correlation requires at least 2 points"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::invalid("correlation inputs must be finite"));
    }
    Ok(())
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&x| x == v[0])
}

/// Pearson product-moment correlation, clamped to `[-1, 1]` against rounding.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    if is_constant(x) || is_constant(y) {
        return Err(Error::UndefinedCorrelation(
            "one side is constant".to_string(),
        ));
    }
    let n = x.len() as f64;
    let mx = sum::pairwise(x) / n;
    let my = sum::pairwise(y) / n;
    let sxy = sum::pairwise_zip_by(x, y, |a, b| (a - mx) * (b - my));
    let sxx = sum::pairwise_by(x, |a| {
        let d = a - mx;
        d * d
    });
    let syy = sum::pairwise_by(y, |b| {
        let d = b - my;
        d * d
    });
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::UndefinedCorrelation(
            "zero variance after centering".to_string(),
        ));
    }
    // single sqrt keeps perfectly proportional inputs at exactly +-1
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman rank correlation: Pearson correlation of the fractional ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    if is_constant(x) || is_constant(y) {
        return Err(Error::UndefinedCorrelation(
            "one side is constant".to_string(),
        ));
    }
    pearson(&fractional_ranks(x), &fractional_ranks(y))
}

/// Root mean square error `sqrt(mean((pred - target)^2))`.
pub fn rmse(pred: &[f64], target: &[f64]) -> Result<f64> {
    if pred.len() != target.len() {
        return Err(Error::invalid(format!(
            "rmse inputs differ in length: {} vs {}",
            pred.len(),
            target.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = pred.len() as f64;
    let ss = sum::pairwise_zip_by(pred, target, |p, t| {
        let r = p - t;
        r * r
    });
    Ok((ss / n).sqrt())
}
