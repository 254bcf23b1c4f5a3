//! Named quality indices: preprocessing + local-similarity map + pooling +
//! score polarity, reproducible by name.
//!
//! Ten presets come built in (see [`builtin_indices`]); custom compositions
//! can be assembled programmatically or from a JSON document via
//! [`IndexConfig`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{gms_map, mse_map, ssim_map, GmsParams, SsimParams};
use crate::pooling::{self, Mct, PoolingSpec};
use crate::raster::{downsample2, to_grayscale, DecodedImage, GrayImage};

/// Which local-similarity map an index builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Gms,
    Mse,
    Ssim,
}

impl std::fmt::Display for MapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MapKind::Gms => write!(f, "gms"),
            MapKind::Mse => write!(f, "mse"),
            MapKind::Ssim => write!(f, "ssim"),
        }
    }
}

/// Preprocessing applied identically to both images before the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preprocess {
    pub grayscale: bool,
    pub downsample2: bool,
}

/// Whether a larger score means better or worse quality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarity {
    HigherIsBetter,
    LowerIsBetter,
}

impl std::fmt::Display for Polarity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Polarity::HigherIsBetter => write!(f, "higher-is-better"),
            Polarity::LowerIsBetter => write!(f, "lower-is-better"),
        }
    }
}

impl std::str::FromStr for Polarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "higher-is-better" | "higher" => Ok(Polarity::HigherIsBetter),
            "lower-is-better" | "lower" => Ok(Polarity::LowerIsBetter),
            other => Err(Error::invalid(format!("unknown polarity `{other}`"))),
        }
    }
}

/// The polarity a composition implies: squared-error scores and deviation
/// poolings of similarity maps shrink as quality improves; mean-pooled
/// similarity grows.
pub fn expected_polarity(map_kind: MapKind, pooling: &PoolingSpec) -> Polarity {
    match map_kind {
        MapKind::Mse => Polarity::LowerIsBetter,
        MapKind::Gms | MapKind::Ssim => match pooling {
            PoolingSpec::Mean | PoolingSpec::WeightedMean { .. } => Polarity::HigherIsBetter,
            _ => Polarity::LowerIsBetter,
        },
    }
}

/// A named, reproducible quality index.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSpec {
    pub name: String,
    pub map_kind: MapKind,
    pub preprocess: Preprocess,
    pub pooling: PoolingSpec,
    pub polarity: Polarity,
    /// Used when `map_kind` is [`MapKind::Gms`].
    pub gms: GmsParams,
    /// Used when `map_kind` is [`MapKind::Ssim`].
    pub ssim: SsimParams,
}

impl IndexSpec {
    /// Builds a spec with the polarity implied by the composition and default
    /// map parameters.
    pub fn new(
        name: impl Into<String>,
        map_kind: MapKind,
        preprocess: Preprocess,
        pooling: PoolingSpec,
    ) -> Result<Self> {
        let spec = IndexSpec {
            name: name.into(),
            polarity: expected_polarity(map_kind, &pooling),
            map_kind,
            preprocess,
            pooling,
            gms: GmsParams::default(),
            ssim: SsimParams::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::invalid("index name must not be empty"));
        }
        self.pooling.validate()?;
        self.gms.validate()?;
        self.ssim.validate()?;
        if self.polarity != expected_polarity(self.map_kind, &self.pooling) {
            return Err(Error::invalid(format!(
                "polarity {} is inconsistent with {} map and {:?} pooling",
                self.polarity,
                self.map_kind,
                self.pooling.kind()
            )));
        }
        Ok(())
    }
}

/// A scored image pair.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityScore {
    pub value: f64,
    pub index_name: String,
}

/// The built-in presets. GMS-based indices follow the grayscale + 2x
/// downsampling convention of their reference implementation; MSE and SSIM
/// presets run at full resolution on grayscale input.
pub fn builtin_indices() -> Vec<IndexSpec> {
    let full = Preprocess {
        grayscale: true,
        downsample2: false,
    };
    let reduced = Preprocess {
        grayscale: true,
        downsample2: true,
    };
    let make = |name: &str, map: MapKind, pre: Preprocess, pooling: PoolingSpec| {
        IndexSpec::new(name, map, pre, pooling).expect("builtin preset is valid")
    };
    vec![
        make("mse", MapKind::Mse, full, PoolingSpec::Mean),
        make("mse-sd", MapKind::Mse, full, PoolingSpec::Sd),
        make("mse-mad", MapKind::Mse, full, PoolingSpec::Mad),
        make("ssim", MapKind::Ssim, full, PoolingSpec::Mean),
        make("ssim-sd", MapKind::Ssim, full, PoolingSpec::Sd),
        make("ssim-mad", MapKind::Ssim, full, PoolingSpec::Mad),
        make("gms-mean", MapKind::Gms, reduced, PoolingSpec::Mean),
        make("gmsd", MapKind::Gms, reduced, PoolingSpec::Sd),
        make("gms-mad", MapKind::Gms, reduced, PoolingSpec::Mad),
        make("gms-dd", MapKind::Gms, reduced, PoolingSpec::Dd { alpha: 0.5 }),
    ]
}

/// Looks a preset up by name.
pub fn find_index(name: &str) -> Result<IndexSpec> {
    builtin_indices()
        .into_iter()
        .find(|spec| spec.name == name)
        .ok_or_else(|| Error::UnknownIndex(name.to_string()))
}

/// Scores a (reference, distorted) pair with the given index: both images get
/// the same preprocessing, then the local-similarity map is built and pooled.
/// Deterministic for fixed inputs and spec.
pub fn score_pair(reference: &DecodedImage, distorted: &DecodedImage, spec: &IndexSpec) -> Result<QualityScore> {
    spec.validate()?;
    if reference.width() != distorted.width() || reference.height() != distorted.height() {
        return Err(Error::dims(
            (reference.width(), reference.height()),
            (distorted.width(), distorted.height()),
        ));
    }
    let r = preprocess(reference, &spec.preprocess)?;
    let d = preprocess(distorted, &spec.preprocess)?;
    let map = match spec.map_kind {
        MapKind::Gms => gms_map(&r, &d, &spec.gms)?,
        MapKind::Mse => mse_map(&r, &d)?,
        MapKind::Ssim => ssim_map(&r, &d, &spec.ssim)?,
    };
    let pooled = pooling::pool_field(&map, &spec.pooling)?;
    Ok(QualityScore {
        value: pooled.value,
        index_name: spec.name.clone(),
    })
}

fn preprocess(img: &DecodedImage, p: &Preprocess) -> Result<GrayImage> {
    let gray = match (img, p.grayscale) {
        (DecodedImage::Gray(g), _) => g.clone(),
        (DecodedImage::Rgb(rgb), true) => to_grayscale(rgb),
        (DecodedImage::Rgb(_), false) => {
            return Err(Error::invalid(
                "color input requires the grayscale preprocessing flag",
            ))
        }
    };
    if p.downsample2 {
        downsample2(&gray)
    } else {
        Ok(gray)
    }
}

/// JSON-friendly description of a custom index. Fields mirror [`IndexSpec`]:
///
/// ```json
/// {
///   "name": "gms-minkowski3",
///   "map": "gms",
///   "preprocess": { "grayscale": true, "downsample2": true },
///   "pooling": { "strategy": "minkowski", "rho": 3.0, "mct": "mean" },
///   "polarity": "lower-is-better",
///   "map_params": { "c": 170.0 }
/// }
/// ```
///
/// `preprocess` defaults per map kind (GMS adds downsampling), `polarity`
/// defaults to the one the composition implies, and `map_params` accepts `c`
/// for GMS or `k1`/`k2`/`dynamic_range`/`window_size`/`sigma` for SSIM.
/// Weighted-mean pooling is not expressible here: it needs a per-pair weight
/// field, which no in-scope map produces.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexConfig {
    pub name: String,
    pub map: MapKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preprocess: Option<Preprocess>,
    pub pooling: PoolingConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarity: Option<Polarity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map_params: Option<MapParamsConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolingConfig {
    /// One of `mean`, `sd`, `mad`, `dd`, `minkowski`.
    pub strategy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mct: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapParamsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamic_range: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

impl PoolingConfig {
    fn build(&self) -> Result<PoolingSpec> {
        let reject = |field: &str, strategy: &str| {
            Err(Error::invalid(format!(
                "`{field}` does not apply to {strategy} pooling"
            )))
        };
        let spec = match self.strategy.as_str() {
            "mean" => PoolingSpec::Mean,
            "sd" => PoolingSpec::Sd,
            "mad" => PoolingSpec::Mad,
            "dd" => PoolingSpec::Dd {
                alpha: self.alpha.unwrap_or(0.5),
            },
            "minkowski" => PoolingSpec::MinkowskiDeviation {
                rho: self
                    .rho
                    .ok_or_else(|| Error::invalid("minkowski pooling requires `rho`"))?,
                mct: match self.mct.as_deref() {
                    None | Some("mean") => Mct::Mean,
                    Some("median") => Mct::Median,
                    Some(other) => return Err(Error::invalid(format!("unknown mct `{other}`"))),
                },
            },
            other => return Err(Error::invalid(format!("unknown pooling strategy `{other}`"))),
        };
        match &spec {
            PoolingSpec::Dd { .. } => {
                if self.rho.is_some() || self.mct.is_some() {
                    return reject("rho/mct", "dd");
                }
            }
            PoolingSpec::MinkowskiDeviation { .. } => {
                if self.alpha.is_some() {
                    return reject("alpha", "minkowski");
                }
            }
            _ => {
                if self.alpha.is_some() {
                    return reject("alpha", &self.strategy);
                }
                if self.rho.is_some() || self.mct.is_some() {
                    return reject("rho/mct", &self.strategy);
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl IndexConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("index config: {e}")))
    }

    /// Resolves the config into a validated [`IndexSpec`].
    pub fn into_spec(self) -> Result<IndexSpec> {
        let pooling = self.pooling.build()?;
        let preprocess = self.preprocess.unwrap_or(Preprocess {
            grayscale: true,
            downsample2: self.map == MapKind::Gms,
        });
        let mut gms = GmsParams::default();
        let mut ssim = SsimParams::default();
        if let Some(mp) = &self.map_params {
            match self.map {
                MapKind::Gms => {
                    if mp.k1.is_some()
                        || mp.k2.is_some()
                        || mp.dynamic_range.is_some()
                        || mp.window_size.is_some()
                        || mp.sigma.is_some()
                    {
                        return Err(Error::invalid("ssim parameters do not apply to a gms map"));
                    }
                    if let Some(c) = mp.c {
                        gms.c = c;
                    }
                }
                MapKind::Ssim => {
                    if mp.c.is_some() {
                        return Err(Error::invalid("`c` does not apply to an ssim map"));
                    }
                    if let Some(v) = mp.k1 {
                        ssim.k1 = v;
                    }
                    if let Some(v) = mp.k2 {
                        ssim.k2 = v;
                    }
                    if let Some(v) = mp.dynamic_range {
                        ssim.dynamic_range = v;
                    }
                    if let Some(v) = mp.window_size {
                        ssim.window_size = v;
                    }
                    if let Some(v) = mp.sigma {
                        ssim.sigma = v;
                    }
                }
                MapKind::Mse => {
                    return Err(Error::invalid("map_params do not apply to an mse map"));
                }
            }
        }
        let spec = IndexSpec {
            name: self.name,
            map_kind: self.map,
            preprocess,
            polarity: self
                .polarity
                .unwrap_or_else(|| expected_polarity(self.map, &pooling)),
            pooling,
            gms,
            ssim,
        };
        spec.validate()?;
        Ok(spec)
    }
}
