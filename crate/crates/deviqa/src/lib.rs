//! Full-reference image quality assessment built around deviation pooling.
//!
//! The toolkit deliberately separates the two halves of a quality index:
//!
//! 1. **Local-similarity maps** ([`maps`]): per-pixel fields comparing a
//!    reference against a distorted image — squared error, gradient-magnitude
//!    similarity and local SSIM.
//! 2. **Pooling** ([`pooling`]): reducing such a field to one score — mean,
//!    weighted mean, or a deviation statistic (SD, MAD, their blend, or a
//!    generalized Minkowski deviation about a mean/median center).
//!
//! Any map can be pooled by any strategy. The [`index`] registry names the
//! useful compositions (`gmsd` is the GMS map under SD pooling, `gms-mad`
//! swaps in MAD, and so on) and [`dataset`] evaluates an index against a
//! manifest of subjectively rated image pairs, reporting Spearman/Pearson
//! correlation and RMSE through a fitted logistic mapping. [`bench`](mod@bench)
//! measures pooling runtimes on synthetic buffers.
//!
//! ```
//! use deviqa::{pooling, synth};
//!
//! let ls = synth::uniform_buffer(4096, 1);
//! let joint = pooling::dd_pool_joint(&ls, 0.5).unwrap();
//! assert!(joint.mad.value <= joint.sd.value);
//! ```
//!
//! Runnable walkthroughs for each capability live in `examples/`; the
//! companion `deviqa` binary exposes the same operations on the command line.
//!
//! All types are immutable after construction and every operation is a pure
//! function of its inputs, so values can be shared or sent across threads
//! freely. Reductions are sequential and deterministic for a fixed input.

pub mod bench;
pub mod dataset;
mod error;
pub mod index;
pub mod logistic;
pub mod maps;
pub mod pooling;
pub mod raster;
pub mod stats;
mod sum;
pub mod synth;

pub use error::{Error, Result};

pub use index::{builtin_indices, find_index, score_pair, IndexConfig, IndexSpec, MapKind, Polarity, Preprocess, QualityScore};
pub use maps::{gms_map, mse_map, ssim_map, GmsParams, SsimParams};
pub use pooling::{
    dd_pool_joint, mad_pool, mean_pool, minkowski_deviation_pool, pool, pool_field, sd_pool,
    weighted_mean_pool, JointDeviation, Mct, PooledScore, PoolingKind, PoolingSpec,
};
pub use raster::{
    convolve3x3, downsample2, gradient_magnitude_prewitt, load_image, save_gray, to_grayscale,
    DecodedImage, GrayImage, RgbRaster, ScalarField,
};
pub use stats::{fractional_ranks, pearson, rmse, spearman};

pub use dataset::{evaluate_dataset, DatasetManifest, EvaluationReport, ManifestEntry};
pub use logistic::{fit_logistic, LogisticParams};
