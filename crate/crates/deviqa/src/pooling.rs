//! Score pooling: reduce a local-similarity map (or any list of values) to a
//! single scalar.
//!
//! Besides the classic mean and weighted mean, this module implements the
//! deviation family: population standard deviation (SD), mean absolute
//! deviation about the mean (MAD), their blend ("double deviation", DD) and
//! the generalized Minkowski deviation of order `rho` about a chosen measure
//! of central tendency (mean or median),
//!
//! ```text
//! D(x, mct; rho) = ( 1/N * sum_i |x_i - mct|^rho )^(1/rho)
//! ```
//!
//! which reproduces MAD at `rho = 1` and SD at `rho = 2` when the mean is the
//! center. SD and MAD share the per-element deviations `|x_i - mean|`, so
//! [`dd_pool_joint`] computes both (and their blend) in one sweep over the
//! data instead of two.
//!
//! All reductions are sequential and deterministic for a fixed input, and use
//! pairwise accumulation so that the documented 1e-12 identities hold on
//! large inputs. Deviations of a constant list are exactly zero.

use crate::error::{Error, Result};
use crate::raster::ScalarField;
use crate::sum;

/// Measure of central tendency for [`minkowski_deviation_pool`].
///
/// The median of an even-length list is the mean of the two middle values
/// after sorting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mct {
    Mean,
    Median,
}

impl std::fmt::Display for Mct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mct::Mean => write!(f, "mean"),
            Mct::Median => write!(f, "median"),
        }
    }
}

/// A pooling strategy together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum PoolingSpec {
    Mean,
    /// `sum(ls * w) / sum(w)`; weights must be non-negative with positive sum
    /// and match the pooled field element-for-element.
    WeightedMean { weights: ScalarField },
    /// Population standard deviation (divisor N).
    Sd,
    /// Mean absolute deviation about the mean.
    Mad,
    /// `alpha * SD + (1 - alpha) * MAD`, `alpha` in `[0, 1]`.
    Dd { alpha: f64 },
    /// Generalized deviation of order `rho >= 1` about `mct`.
    MinkowskiDeviation { rho: f64, mct: Mct },
}

impl PoolingSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PoolingSpec::Mean | PoolingSpec::Sd | PoolingSpec::Mad => Ok(()),
            PoolingSpec::WeightedMean { weights } => {
                if weights.data().iter().any(|&w| w < 0.0) {
                    return Err(Error::invalid("weights must be non-negative"));
                }
                Ok(())
            }
            PoolingSpec::Dd { alpha } => {
                if !alpha.is_finite() || !(0.0..=1.0).contains(alpha) {
                    return Err(Error::invalid(format!("alpha must be in [0, 1], got {alpha}")));
                }
                Ok(())
            }
            PoolingSpec::MinkowskiDeviation { rho, .. } => {
                if !rho.is_finite() || *rho < 1.0 {
                    return Err(Error::invalid(format!("rho must be >= 1, got {rho}")));
                }
                Ok(())
            }
        }
    }

    /// Lightweight parameter echo (weights elided) carried by [`PooledScore`].
    pub fn kind(&self) -> PoolingKind {
        match self {
            PoolingSpec::Mean => PoolingKind::Mean,
            PoolingSpec::WeightedMean { .. } => PoolingKind::WeightedMean,
            PoolingSpec::Sd => PoolingKind::Sd,
            PoolingSpec::Mad => PoolingKind::Mad,
            PoolingSpec::Dd { alpha } => PoolingKind::Dd { alpha: *alpha },
            PoolingSpec::MinkowskiDeviation { rho, mct } => PoolingKind::MinkowskiDeviation {
                rho: *rho,
                mct: *mct,
            },
        }
    }
}

/// Which strategy produced a [`PooledScore`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PoolingKind {
    Mean,
    WeightedMean,
    Sd,
    Mad,
    Dd { alpha: f64 },
    MinkowskiDeviation { rho: f64, mct: Mct },
}

/// A pooled score: the value, the element count it was reduced from and the
/// strategy that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PooledScore {
    pub value: f64,
    pub n: usize,
    pub strategy: PoolingKind,
}

/// The three scores produced by one joint sweep: MAD, SD and their blend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDeviation {
    pub mad: PooledScore,
    pub sd: PooledScore,
    pub dd: PooledScore,
}

struct Summary {
    n: usize,
    mean: f64,
    min: f64,
    max: f64,
}

impl Summary {
    fn is_constant(&self) -> bool {
        self.min == self.max
    }
}

/// One validating sweep: finiteness, min/max and the mean. For a constant
/// list the mean is returned exactly (sum/n would round), which is what makes
/// deviations of constant input exactly zero downstream.
fn summarize(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        if !v.is_finite() {
            return Err(Error::invalid("pooled values must all be finite"));
        }
        if v < min {
            min = v;
        }
        if v > max {
            max = v;
        }
    }
    let n = values.len();
    let mean = if min == max {
        min
    } else {
        sum::pairwise(values) / n as f64
    };
    if !mean.is_finite() {
        return Err(Error::invalid("mean overflowed"));
    }
    Ok(Summary { n, mean, min, max })
}

fn finished(value: f64, n: usize, strategy: PoolingKind) -> Result<PooledScore> {
    if !value.is_finite() {
        return Err(Error::invalid("pooled value is not finite"));
    }
    Ok(PooledScore { value, n, strategy })
}

/// Arithmetic mean.
pub fn mean_pool(values: &[f64]) -> Result<PooledScore> {
    let s = summarize(values)?;
    finished(s.mean, s.n, PoolingKind::Mean)
}

/// Weighted mean `sum(v_i * w_i) / sum(w_i)`.
pub fn weighted_mean_pool(values: &[f64], weights: &[f64]) -> Result<PooledScore> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if values.len() != weights.len() {
        return Err(Error::invalid(format!(
            "value and weight lengths differ: {} vs {}",
            values.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::invalid("weights must be finite and non-negative"));
    }
    let wsum = sum::pairwise(weights);
    if wsum <= 0.0 {
        return Err(Error::DegenerateWeights);
    }
    let num = sum::pairwise_zip_by(values, weights, |v, w| v * w);
    finished(num / wsum, values.len(), PoolingKind::WeightedMean)
}

/// Population standard deviation (divisor N, not N-1).
pub fn sd_pool(values: &[f64]) -> Result<PooledScore> {
    let s = summarize(values)?;
    let value = if s.is_constant() {
        0.0
    } else {
        let m = s.mean;
        (sum::pairwise_by(values, |v| {
            let d = v - m;
            d * d
        }) / s.n as f64)
            .sqrt()
    };
    finished(value, s.n, PoolingKind::Sd)
}

/// Mean absolute deviation about the mean.
pub fn mad_pool(values: &[f64]) -> Result<PooledScore> {
    let s = summarize(values)?;
    let value = if s.is_constant() {
        0.0
    } else {
        let m = s.mean;
        sum::pairwise_by(values, |v| (v - m).abs()) / s.n as f64
    };
    finished(value, s.n, PoolingKind::Mad)
}

/// Computes MAD, SD and their blend `alpha * SD + (1 - alpha) * MAD` from a
/// single sweep over the shared deviations `|v_i - mean|`.
///
/// The returned MAD and SD agree with [`mad_pool`] / [`sd_pool`] bit for bit:
/// both accumulate the same per-element terms through the same reduction tree.
pub fn dd_pool_joint(values: &[f64], alpha: f64) -> Result<JointDeviation> {
    if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha must be in [0, 1], got {alpha}")));
    }
    let s = summarize(values)?;
    let (mad, sd) = if s.is_constant() {
        (0.0, 0.0)
    } else {
        let m = s.mean;
        let (abs_sum, sq_sum) = sum::pairwise_by2(values, |v| {
            let d = v - m;
            (d.abs(), d * d)
        });
        (abs_sum / s.n as f64, (sq_sum / s.n as f64).sqrt())
    };
    let dd = alpha * sd + (1.0 - alpha) * mad;
    Ok(JointDeviation {
        mad: finished(mad, s.n, PoolingKind::Mad)?,
        sd: finished(sd, s.n, PoolingKind::Sd)?,
        dd: finished(dd, s.n, PoolingKind::Dd { alpha })?,
    })
}

/// Generalized deviation of order `rho` about the chosen central tendency:
/// `(1/N * sum |v_i - mct|^rho)^(1/rho)`.
///
/// With `Mct::Mean` this reproduces [`mad_pool`] at `rho = 1` and [`sd_pool`]
/// at `rho = 2`.
pub fn minkowski_deviation_pool(values: &[f64], rho: f64, mct: Mct) -> Result<PooledScore> {
    if !rho.is_finite() || rho < 1.0 {
        return Err(Error::invalid(format!("rho must be >= 1, got {rho}")));
    }
    let s = summarize(values)?;
    let value = if s.is_constant() {
        0.0
    } else {
        let center = match mct {
            Mct::Mean => s.mean,
            Mct::Median => median(values),
        };
        let p = sum::pairwise_by(values, |v| (v - center).abs().powf(rho)) / s.n as f64;
        p.powf(1.0 / rho)
    };
    finished(value, s.n, PoolingKind::MinkowskiDeviation { rho, mct })
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Dispatches a flat value list to the strategy described by `spec`.
pub fn pool(values: &[f64], spec: &PoolingSpec) -> Result<PooledScore> {
    spec.validate()?;
    match spec {
        PoolingSpec::Mean => mean_pool(values),
        PoolingSpec::WeightedMean { weights } => weighted_mean_pool(values, weights.data()),
        PoolingSpec::Sd => sd_pool(values),
        PoolingSpec::Mad => mad_pool(values),
        PoolingSpec::Dd { alpha } => Ok(dd_pool_joint(values, *alpha)?.dd),
        PoolingSpec::MinkowskiDeviation { rho, mct } => {
            minkowski_deviation_pool(values, *rho, *mct)
        }
    }
}

/// Pools a 2-D field, flattened row-major. Weighted-mean weights must match
/// the field dimensions.
pub fn pool_field(field: &ScalarField, spec: &PoolingSpec) -> Result<PooledScore> {
    if let PoolingSpec::WeightedMean { weights } = spec {
        if weights.width() != field.width() || weights.height() != field.height() {
            return Err(Error::dims(
                (field.width(), field.height()),
                (weights.width(), weights.height()),
            ));
        }
    }
    pool(field.data(), spec)
}
