//! Pearson-correlation agreement between full-rate and subsampled MFCCs.
//!
//! Two protocols: concatenate every frame of a file into one long vector
//! and correlate once (case I), or correlate frame by frame and summarize
//! the per-frame coefficients (case II). [`corpus_report`] runs both
//! feature pipelines over a set of files — decimating internally — and
//! aggregates per-file results with population statistics, processing
//! files in parallel while keeping the output in input order.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audio_io::read_wav;
use crate::cepstrum::{mfcc_pipeline, mfcc_subsampled_pipeline, MfccMatrix, PipelineConfig};
use crate::error::{Error, Result};
use crate::resample::decimate;

/// Which comparison protocol a report used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II")]
    II,
}

/// Per-frame correlations of one file pair plus their summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Case2Result {
    /// One coefficient per comparable frame, in frame order.
    pub per_frame: Vec<f64>,
    /// Mean over `per_frame`.
    pub mean: f64,
    /// Population variance over `per_frame`.
    pub variance: f64,
    /// Frames dropped because one side was constant.
    pub skipped_frames: usize,
}

/// One file's correlation in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileCorrelation {
    pub id: String,
    pub r: f64,
}

/// A file a report had to drop, and why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedFile {
    pub id: String,
    pub reason: String,
}

/// Corpus-level agreement summary.
///
/// `mean` and `variance` are population statistics over `per_file` (for
/// case II each file contributes its frame-mean). The `pooled_*` fields
/// appear only for case II and summarize every frame of every file as one
/// population, since "mean over frames" is ambiguous between the two
/// groupings; `frames_skipped` counts constant frames dropped across the
/// corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub case: Case,
    pub per_file: Vec<FileCorrelation>,
    pub mean: f64,
    pub variance: f64,
    pub skipped: Vec<SkippedFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pooled_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pooled_variance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frames_skipped: Option<usize>,
}

/// Pearson correlation with population normalization, clamped to [-1, 1].
///
/// The quotient is formed as `cov / sqrt(var_x * var_y)` over the raw
/// (un-divided) sums so that bitwise-equal inputs give exactly 1.0 and an
/// exact negation gives exactly -1.0.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewPoints(x.len()));
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    // Deviations near 1e155 overflow when squared; a power-of-two rescale
    // keeps the sums finite while only shifting exponents, so it cannot
    // perturb the quotient.
    let scale_x = pow2_rescale(x, mean_x);
    let scale_y = pow2_rescale(y, mean_y);
    let mut sum_xx = 0.0;
    let mut sum_yy = 0.0;
    let mut sum_xy = 0.0;
    for (&xi, &yi) in x.iter().zip(y.iter()) {
        let dx = (xi - mean_x) * scale_x;
        let dy = (yi - mean_y) * scale_y;
        sum_xx += dx * dx;
        sum_yy += dy * dy;
        sum_xy += dx * dy;
    }
    if sum_xx == 0.0 || sum_yy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    // The n's cancel in the quotient, so skip dividing the sums. Take one
    // square root of the product: when y is bitwise x, the quotient is
    // sum_xx / sqrt(sum_xx^2), which IEEE arithmetic evaluates to exactly 1.
    let mut denom = (sum_xx * sum_yy).sqrt();
    if !denom.is_finite() {
        denom = sum_xx.sqrt() * sum_yy.sqrt(); // the product overflowed
    }
    Ok((sum_xy / denom).clamp(-1.0, 1.0))
}

/// A power of two that brings the largest deviation from `mean` down to
/// order 1 when it is big enough to overflow a squared sum; 1.0 otherwise.
fn pow2_rescale(values: &[f64], mean: f64) -> f64 {
    let max_dev = values.iter().fold(0.0f64, |m, &v| m.max((v - mean).abs()));
    if max_dev > 1e150 {
        (-max_dev.log2().ceil()).exp2()
    } else {
        1.0
    }
}

/// Correlate two MFCC matrices as single concatenated vectors.
///
/// Columns beyond the shorter matrix are ignored; concatenation is
/// frame-major (frame 0's coefficients, then frame 1's, ...).
pub fn compare_case1(orig: &MfccMatrix, sub: &MfccMatrix) -> Result<f64> {
    if orig.n_coeffs() != sub.n_coeffs() {
        return Err(Error::RowCountMismatch {
            left: orig.n_coeffs(),
            right: sub.n_coeffs(),
        });
    }
    let frames = orig.n_frames().min(sub.n_frames());
    if frames == 0 {
        return Err(Error::EmptyMatrix);
    }
    let flatten = |m: &MfccMatrix| -> Vec<f64> {
        let mut v = Vec::with_capacity(m.n_coeffs() * frames);
        for p in 0..frames {
            v.extend(m.coeffs.column(p).iter());
        }
        v
    };
    pearson(&flatten(orig), &flatten(sub))
}

/// Correlate two MFCC matrices frame by frame.
///
/// Frames where either side is constant (zero variance) are skipped and
/// counted rather than assigned an arbitrary coefficient; if every frame
/// is skipped the comparison fails.
pub fn compare_case2(orig: &MfccMatrix, sub: &MfccMatrix) -> Result<Case2Result> {
    if orig.n_coeffs() != sub.n_coeffs() {
        return Err(Error::RowCountMismatch {
            left: orig.n_coeffs(),
            right: sub.n_coeffs(),
        });
    }
    let frames = orig.n_frames().min(sub.n_frames());
    if frames == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut per_frame = Vec::with_capacity(frames);
    let mut skipped_frames = 0usize;
    for p in 0..frames {
        let a = orig.coeffs.column(p).to_vec();
        let b = sub.coeffs.column(p).to_vec();
        match pearson(&a, &b) {
            Ok(r) => per_frame.push(r),
            Err(Error::ZeroVariance) | Err(Error::TooFewPoints(_)) => skipped_frames += 1,
            Err(e) => return Err(e),
        }
    }
    if per_frame.is_empty() {
        return Err(Error::AllFramesDegenerate(frames));
    }
    let (mean, variance) = mean_variance(&per_frame);
    Ok(Case2Result {
        per_frame,
        mean,
        variance,
        skipped_frames,
    })
}

/// Population mean and variance of a non-empty slice.
pub fn mean_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, variance)
}

struct FileOutcome {
    id: String,
    result: Result<(f64, Option<Case2Result>)>,
}

/// Read one file, run both pipelines, and compare them per `case`.
///
/// Returns the file's headline coefficient (the concatenated-vector r for
/// case I, the frame-mean for case II) plus the full per-frame detail for
/// case II.
pub fn file_correlation(
    path: &std::path::Path,
    config: &PipelineConfig,
    case: Case,
) -> Result<(f64, Option<Case2Result>)> {
    let signal = read_wav(path)?;
    let full = mfcc_pipeline(&signal, config)?;
    let reduced = decimate(&signal, config.alpha)?;
    let sub = mfcc_subsampled_pipeline(&reduced, config)?;
    match case {
        Case::I => Ok((compare_case1(&full, &sub)?, None)),
        Case::II => {
            let detail = compare_case2(&full, &sub)?;
            Ok((detail.mean, Some(detail)))
        }
    }
}

/// Evaluate a whole corpus: per-file correlations in input order, with
/// unreadable or degenerate files collected under `skipped` instead of
/// aborting the run. Files are processed in parallel.
pub fn corpus_report(
    files: &[PathBuf],
    config: &PipelineConfig,
    case: Case,
) -> Result<CorrelationReport> {
    if files.is_empty() {
        return Err(Error::NoInputFiles);
    }
    config.validate()?;
    let outcomes: Vec<FileOutcome> = files
        .par_iter()
        .map(|path| FileOutcome {
            id: path.display().to_string(),
            result: file_correlation(path, config, case),
        })
        .collect();

    let mut per_file = Vec::new();
    let mut skipped = Vec::new();
    let mut pooled = Vec::new();
    let mut frames_skipped = 0usize;
    for outcome in outcomes {
        match outcome.result {
            Ok((r, detail)) => {
                per_file.push(FileCorrelation { id: outcome.id, r });
                if let Some(d) = detail {
                    pooled.extend_from_slice(&d.per_frame);
                    frames_skipped += d.skipped_frames;
                }
            }
            Err(e) => skipped.push(SkippedFile {
                id: outcome.id,
                reason: e.to_string(),
            }),
        }
    }
    if per_file.is_empty() {
        return Err(Error::AllFilesFailed(files.len()));
    }
    let rs: Vec<f64> = per_file.iter().map(|f| f.r).collect();
    let (mean, variance) = mean_variance(&rs);
    let (pooled_mean, pooled_variance, frames_skipped) = match case {
        Case::I => (None, None, None),
        Case::II => {
            let (pm, pv) = mean_variance(&pooled);
            (Some(pm), Some(pv), Some(frames_skipped))
        }
    };
    Ok(CorrelationReport {
        case,
        per_file,
        mean,
        variance,
        skipped,
        pooled_mean,
        pooled_variance,
        frames_skipped,
    })
}
