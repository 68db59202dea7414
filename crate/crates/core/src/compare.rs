//! Comparison statistics between score vectors, scatter tables and batch
//! scoring from a manifest.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::PesqConfig;
use crate::error::{PesqError, Result};
use crate::multichannel::{score_multichannel, StereoStrategy};
use crate::wav::read_wav;

/// Marker written in place of an undefined correlation.
pub const UNDEFINED: &str = "undefined";

fn ser_rho<S: Serializer>(rho: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match rho {
        Some(v) => s.serialize_f64(*v),
        None => s.serialize_str(UNDEFINED),
    }
}

fn de_rho<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(v) => Ok(Some(v)),
        Raw::Text(t) if t == UNDEFINED => Ok(None),
        Raw::Text(t) => Err(serde::de::Error::custom(format!("invalid correlation '{t}'"))),
    }
}

/// Agreement between two score vectors; differences are `b - a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonStats {
    pub n: usize,
    /// Pearson correlation; `None` (written as "undefined") when either
    /// vector has zero variance.
    #[serde(serialize_with = "ser_rho", deserialize_with = "de_rho")]
    pub pearson_rho: Option<f64>,
    pub rmse: f64,
    pub mean_diff: f64,
    pub max_abs_diff: f64,
}

fn check_pair(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(PesqError::LengthMismatch(a.len(), b.len()));
    }
    if let Some(i) = a.iter().zip(b).position(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(PesqError::NonFinite(i));
    }
    Ok(())
}

/// Pearson correlation, RMSE, mean and maximum absolute difference.
pub fn compare_scores(a: &[f64], b: &[f64]) -> Result<ComparisonStats> {
    check_pair(a, b)?;
    let n = a.len();
    if n < 2 {
        return Err(PesqError::TooFewItems(n));
    }
    let nf = n as f64;
    let mean_a = a.iter().sum::<f64>() / nf;
    let mean_b = b.iter().sum::<f64>() / nf;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (da, db) = (x - mean_a, y - mean_b);
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    // Centered dot products: the n vs n-1 convention cancels.
    let pearson_rho = (saa > 0.0 && sbb > 0.0).then(|| (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0));
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    Ok(ComparisonStats {
        n,
        pearson_rho,
        rmse: (diffs.iter().map(|d| d * d).sum::<f64>() / nf).sqrt(),
        mean_diff: diffs.iter().sum::<f64>() / nf,
        max_abs_diff: diffs.iter().fold(0.0, |m, d| m.max(d.abs())),
    })
}

/// One row of a scatter table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub label: String,
    pub a: f64,
    pub b: f64,
    pub diff: f64,
}

/// Per-item table for scatter and difference plots. Missing labels are
/// numbered from 1.
pub fn scatter_data(a: &[f64], b: &[f64], labels: &[String]) -> Result<Vec<ScatterRow>> {
    check_pair(a, b)?;
    if !labels.is_empty() && labels.len() != a.len() {
        return Err(PesqError::LengthMismatch(labels.len(), a.len()));
    }
    Ok(a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (&x, &y))| ScatterRow {
            label: labels.get(i).cloned().unwrap_or_else(|| (i + 1).to_string()),
            a: x,
            b: y,
            diff: y - x,
        })
        .collect())
}

fn csv_err(e: csv::Error) -> PesqError {
    PesqError::Manifest(e.to_string())
}

/// Writes rows as CSV with a header derived from the row type.
pub fn write_csv<W: Write, R: Serialize>(rows: &[R], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| PesqError::Wav(e.into()))
}

/// Reads CSV rows with a header.
pub fn read_csv<Rd: Read, R: for<'de> Deserialize<'de>>(input: Rd) -> Result<Vec<R>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<std::result::Result<Vec<R>, _>>()
        .map_err(csv_err)
}

/// One pair listed in a manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    #[serde(rename = "ref")]
    pub reference: PathBuf,
    #[serde(rename = "deg")]
    pub degraded: PathBuf,
}

/// Reads a `ref,deg` manifest. Relative paths are taken relative to the
/// manifest's directory.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<ManifestEntry>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| PesqError::Manifest(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut rows: Vec<ManifestEntry> = read_csv(file)?;
    for r in &mut rows {
        if r.reference.is_relative() {
            r.reference = base.join(&r.reference);
        }
        if r.degraded.is_relative() {
            r.degraded = base.join(&r.degraded);
        }
    }
    Ok(rows)
}

/// Outcome of one manifest item; exactly one of `score` and `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchItem {
    #[serde(rename = "ref")]
    pub reference: String,
    #[serde(rename = "deg")]
    pub degraded: String,
    pub mode: String,
    pub strategy: String,
    pub score: Option<f64>,
    pub error: Option<String>,
}

/// Scores every manifest pair, in manifest order. Failures are recorded per
/// item rather than aborting the batch.
pub fn batch_score(manifest: &[ManifestEntry], cfg: &PesqConfig, strategy: StereoStrategy) -> Vec<BatchItem> {
    manifest
        .par_iter()
        .map(|entry| {
            let load = |path: &Path| read_wav::<f64>(path).map_err(|e| format!("{}: {e}", path.display()));
            let result = load(&entry.reference).and_then(|r| {
                let d = load(&entry.degraded)?;
                score_multichannel(&r, &d, cfg, strategy).map_err(|e| e.to_string())
            });
            let (score, error) = match result {
                Ok(s) => (Some(s.score), None),
                Err(e) => (None, Some(e)),
            };
            BatchItem {
                reference: entry.reference.display().to_string(),
                degraded: entry.degraded.display().to_string(),
                mode: cfg.mode().to_string(),
                strategy: strategy.to_string(),
                score,
                error,
            }
        })
        .collect()
}

/// JSON summary of a comparison between two batch runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    #[serde(flatten)]
    pub stats: ComparisonStats,
    /// Items scored in only one of the runs (or neither); excluded above.
    pub failures: usize,
}

/// Pairs two batch results item by item. Items that failed in either run
/// are counted and excluded from the statistics.
pub fn compare_batches(a: &[BatchItem], b: &[BatchItem]) -> Result<(BatchReport, Vec<ScatterRow>)> {
    if a.len() != b.len() {
        return Err(PesqError::LengthMismatch(a.len(), b.len()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut labels = Vec::new();
    let mut failures = 0;
    for (x, y) in a.iter().zip(b) {
        match (x.score, y.score) {
            (Some(sx), Some(sy)) => {
                xs.push(sx);
                ys.push(sy);
                labels.push(x.degraded.clone());
            }
            _ => failures += 1,
        }
    }
    let stats = compare_scores(&xs, &ys)?;
    let rows = scatter_data(&xs, &ys, &labels)?;
    Ok((BatchReport { stats, failures }, rows))
}
