//! Dataset-level evaluation: score (reference, distorted, subjective-score)
//! triples with an index and report SRC, PCC and RMSE.
//!
//! Spearman correlation is computed on the raw scores and reported as an
//! absolute value, so it is independent of both the index polarity and any
//! fitted mapping. Pearson correlation and RMSE go through the fitted
//! logistic mapping; when that fit cannot run or collapses they are reported
//! as NaN (serialized as `null`), mirroring how published comparison tables
//! carry the occasional N/A cell.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{score_pair, IndexSpec, Polarity};
use crate::logistic::{fit_logistic, initial_params, LogisticParams};
use crate::pooling;
use crate::raster::load_image;
use crate::stats::{pearson, rmse, spearman};

/// One manifest row: an image pair with its subjective score.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub ref_path: PathBuf,
    pub dist_path: PathBuf,
    pub mos: f64,
    pub tag: Option<String>,
}

/// A dataset to evaluate: entries plus the polarity of its subjective scale
/// (MOS grows with quality, DMOS shrinks).
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
    pub mos_polarity: Polarity,
}

/// A manifest row that could not be parsed.
#[derive(Debug, Clone, PartialEq)]
pub struct MalformedRow {
    /// 1-based line number in the manifest file.
    pub row: usize,
    pub message: String,
}

impl DatasetManifest {
    /// Reads a `ref,dist,mos[,tag]` CSV. Paths are resolved relative to the
    /// manifest's directory. Malformed rows are returned alongside the
    /// manifest with their line numbers rather than aborting the parse.
    pub fn from_csv_path(path: &Path, mos_polarity: Polarity) -> Result<(Self, Vec<MalformedRow>)> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse_csv(&text, base, mos_polarity)
    }

    /// Parses manifest CSV text; `base_dir` anchors relative paths.
    pub fn parse_csv(
        text: &str,
        base_dir: &Path,
        mos_polarity: Polarity,
    ) -> Result<(Self, Vec<MalformedRow>)> {
        let mut lines = text.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((_, l)) if l.trim().is_empty() => continue,
                Some((_, l)) => break l,
                None => return Err(Error::Dataset("manifest is empty".to_string())),
            }
        };
        let header_fields: Vec<&str> = header.split(',').map(str::trim).collect();
        if header_fields.len() < 3
            || header_fields[0] != "ref"
            || header_fields[1] != "dist"
            || header_fields[2] != "mos"
            || (header_fields.len() == 4 && header_fields[3] != "tag")
            || header_fields.len() > 4
        {
            return Err(Error::Dataset(format!(
                "manifest header must be `ref,dist,mos[,tag]`, got `{header}`"
            )));
        }

        let mut entries = Vec::new();
        let mut malformed = Vec::new();
        for (i, line) in lines {
            let row = i + 1; // 1-based
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            match parse_row(line, base_dir) {
                Ok(entry) => entries.push(entry),
                Err(message) => malformed.push(MalformedRow { row, message }),
            }
        }
        Ok((DatasetManifest { entries, mos_polarity }, malformed))
    }
}

fn parse_row(line: &str, base_dir: &Path) -> std::result::Result<ManifestEntry, String> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() < 3 || fields.len() > 4 {
        return Err(format!("expected 3 or 4 fields, got {}", fields.len()));
    }
    if fields[0].is_empty() || fields[1].is_empty() {
        return Err("paths must not be empty".to_string());
    }
    let mos: f64 = fields[2]
        .parse()
        .map_err(|_| format!("mos `{}` is not a number", fields[2]))?;
    if !mos.is_finite() {
        return Err("mos must be finite".to_string());
    }
    let tag = fields
        .get(3)
        .filter(|t| !t.is_empty())
        .map(|t| t.to_string());
    Ok(ManifestEntry {
        ref_path: base_dir.join(fields[0]),
        dist_path: base_dir.join(fields[1]),
        mos,
        tag,
    })
}

/// One scored manifest entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryScore {
    #[serde(rename = "ref")]
    pub ref_path: String,
    #[serde(rename = "dist")]
    pub dist_path: String,
    pub mos: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
    pub score: f64,
}

/// An entry that failed to score and was excluded from the statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedEntry {
    #[serde(rename = "ref")]
    pub ref_path: String,
    #[serde(rename = "dist")]
    pub dist_path: String,
    pub message: String,
}

/// Spearman correlation within one distortion tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionSrc {
    pub tag: String,
    pub src: f64,
    pub n: usize,
}

/// Average / minimum / population standard deviation of the per-tag SRC values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionSummary {
    pub avg: f64,
    pub min: f64,
    pub std: f64,
}

/// The full evaluation result; serializes to the documented JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub index_name: String,
    pub mos_polarity: Polarity,
    /// Absolute Spearman rank correlation of raw scores against mos.
    pub src: f64,
    /// Pearson correlation of logistic-mapped scores against mos; NaN -> null.
    pub pcc: f64,
    /// RMSE of logistic-mapped scores against mos; NaN -> null.
    pub rmse: f64,
    pub logistic: LogisticParams,
    pub entries: Vec<EntryScore>,
    pub excluded: Vec<ExcludedEntry>,
    /// Per-tag SRC for tags with at least 2 entries, sorted by tag. Tags whose
    /// correlation is undefined (constant on either side) are omitted.
    pub per_distortion: Vec<DistortionSrc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distortion_summary: Option<DistortionSummary>,
}

impl EvaluationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat per-entry CSV: `ref,dist,mos,tag,score`.
    pub fn write_scores_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "ref,dist,mos,tag,score")?;
        for e in &self.entries {
            writeln!(
                w,
                "{},{},{},{},{}",
                e.ref_path,
                e.dist_path,
                e.mos,
                e.tag.as_deref().unwrap_or(""),
                e.score
            )?;
        }
        Ok(())
    }
}

/// Scores every manifest entry with `spec` and assembles the report.
///
/// Entries whose files cannot be read or scored are excluded and listed in
/// the report. Reference images are decoded once and cached across entries.
/// Scoring is sequential and ordered, so reports are reproducible.
pub fn evaluate_dataset(manifest: &DatasetManifest, spec: &IndexSpec) -> Result<EvaluationReport> {
    if manifest.entries.len() < 2 {
        return Err(Error::Dataset(format!(
            "need at least 2 entries, got {}",
            manifest.entries.len()
        )));
    }

    let mut ref_cache = HashMap::new();
    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    for entry in &manifest.entries {
        match score_entry(entry, spec, &mut ref_cache) {
            Ok(score) => entries.push(EntryScore {
                ref_path: entry.ref_path.display().to_string(),
                dist_path: entry.dist_path.display().to_string(),
                mos: entry.mos,
                tag: entry.tag.clone(),
                score,
            }),
            Err(e) => excluded.push(ExcludedEntry {
                ref_path: entry.ref_path.display().to_string(),
                dist_path: entry.dist_path.display().to_string(),
                message: e.to_string(),
            }),
        }
    }
    if entries.is_empty() {
        return Err(Error::Dataset("every entry failed to score".to_string()));
    }
    if entries.len() < 2 {
        return Err(Error::Dataset(
            "fewer than 2 entries scored; correlations undefined".to_string(),
        ));
    }

    let scores: Vec<f64> = entries.iter().map(|e| e.score).collect();
    let mos: Vec<f64> = entries.iter().map(|e| e.mos).collect();

    let src = spearman(&scores, &mos)?.abs();

    let logistic = match fit_logistic(&scores, &mos) {
        Ok(params) => params,
        // too few points for the fit: fall back to the documented
        // initialization and report it as unconverged
        Err(_) => initial_params(&scores, &mos),
    };
    let preds: Vec<f64> = scores.iter().map(|&s| logistic.predict(s)).collect();
    let pcc = pearson(&preds, &mos).unwrap_or(f64::NAN);
    let fit_rmse = rmse(&preds, &mos).unwrap_or(f64::NAN);

    let per_distortion = per_distortion_src(&entries);
    let distortion_summary = summarize_tags(&per_distortion);

    Ok(EvaluationReport {
        index_name: spec.name.clone(),
        mos_polarity: manifest.mos_polarity,
        src,
        pcc,
        rmse: fit_rmse,
        logistic,
        entries,
        excluded,
        per_distortion,
        distortion_summary,
    })
}

fn score_entry(
    entry: &ManifestEntry,
    spec: &IndexSpec,
    ref_cache: &mut HashMap<PathBuf, crate::raster::DecodedImage>,
) -> Result<f64> {
    if !ref_cache.contains_key(&entry.ref_path) {
        let img = load_image(&entry.ref_path)?;
        ref_cache.insert(entry.ref_path.clone(), img);
    }
    let reference = &ref_cache[&entry.ref_path];
    let distorted = load_image(&entry.dist_path)?;
    Ok(score_pair(reference, &distorted, spec)?.value)
}

fn per_distortion_src(entries: &[EntryScore]) -> Vec<DistortionSrc> {
    let mut groups: BTreeMap<&str, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for e in entries {
        if let Some(tag) = &e.tag {
            let g = groups.entry(tag).or_default();
            g.0.push(e.score);
            g.1.push(e.mos);
        }
    }
    groups
        .into_iter()
        .filter(|(_, (s, _))| s.len() >= 2)
        .filter_map(|(tag, (scores, mos))| {
            spearman(&scores, &mos).ok().map(|r| DistortionSrc {
                tag: tag.to_string(),
                src: r.abs(),
                n: scores.len(),
            })
        })
        .collect()
}

fn summarize_tags(per_distortion: &[DistortionSrc]) -> Option<DistortionSummary> {
    if per_distortion.is_empty() {
        return None;
    }
    let values: Vec<f64> = per_distortion.iter().map(|d| d.src).collect();
    let avg = pooling::mean_pool(&values).ok()?.value;
    let std = pooling::sd_pool(&values).ok()?.value;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    Some(DistortionSummary { avg, min, std })
}
