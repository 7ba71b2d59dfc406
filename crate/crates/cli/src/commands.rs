//! The four subcommands: feature extraction, single-file comparison,
//! corpus reporting, and filter-bank dumping.

use std::path::{Path, PathBuf};

use serde::Serialize;
use submel_core::{
    apply_window, build_filterbank, build_modified_filterbank, corpus_report, decimate,
    file_correlation, fill_inactive_bands, frame_signal, hamming_window, log_mel_energies,
    magnitude_spectrum, mfcc_pipeline, mfcc_subsampled_pipeline, read_wav, write_matrix,
    AudioSignal, Case, CorrelationReport, Error, FileCorrelation, MatrixFormat, MelBankSpec,
    MelFilterBank, PipelineConfig, Result,
};

use crate::manifest::{manifest_path, RunManifest};

/// Which filter bank `extract` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bank {
    Standard,
    Modified,
}

/// Which comparison protocol(s) to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseSelect {
    One,
    Two,
    Both,
}

/// Reports for both protocols in one document.
#[derive(Debug, Serialize)]
struct BothReport {
    case_i: CorrelationReport,
    case_ii: CorrelationReport,
}

fn matrix_format(path: &Path) -> Result<MatrixFormat> {
    match path
        .extension()
        .map(|e| e.to_string_lossy().to_lowercase())
        .as_deref()
    {
        Some("csv") => Ok(MatrixFormat::Csv),
        Some("json") => Ok(MatrixFormat::Json),
        other => Err(Error::InvalidConfig {
            field: "out",
            message: format!(
                "cannot infer format from extension {:?}; use .csv or .json",
                other.unwrap_or("")
            ),
        }),
    }
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let body = serde_json::to_string_pretty(value).expect("report serializes") + "\n";
    std::fs::write(path, body).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Extract MFCCs from one file and write them with a manifest sidecar.
///
/// With the standard bank the input is full-rate audio; with the modified
/// bank the input is the already-decimated waveform and `config.alpha`
/// names the factor it was decimated by.
pub fn cmd_extract(
    input: &Path,
    out: &Path,
    bank: Bank,
    config: &PipelineConfig,
    argv: &[String],
) -> Result<()> {
    let format = matrix_format(out)?;
    let signal = read_wav(input)?;
    let features = match bank {
        Bank::Standard => mfcc_pipeline(&signal, config)?,
        Bank::Modified => mfcc_subsampled_pipeline(&signal, config)?,
    };
    write_matrix(features.coeffs.view(), out, format)?;
    RunManifest::new("extract", argv, config, &[input.to_path_buf()])?.write(&manifest_path(out))
}

/// Build the one-file report `compare` prints; identical in shape to a
/// one-file corpus report, but pipeline errors propagate instead of being
/// recorded as skips.
fn single_file_report(
    input: &Path,
    config: &PipelineConfig,
    case: Case,
) -> Result<CorrelationReport> {
    let (r, detail) = file_correlation(input, config, case)?;
    let (pooled_mean, pooled_variance, frames_skipped) = match detail {
        None => (None, None, None),
        Some(d) => (Some(d.mean), Some(d.variance), Some(d.skipped_frames)),
    };
    Ok(CorrelationReport {
        case,
        per_file: vec![FileCorrelation {
            id: input.display().to_string(),
            r,
        }],
        mean: r,
        variance: 0.0,
        skipped: vec![],
        pooled_mean,
        pooled_variance,
        frames_skipped,
    })
}

/// Correlate the full-rate and subsampled features of one file and print
/// the report JSON to stdout. Decimation happens internally; the input is
/// full-rate audio.
pub fn cmd_compare(input: &Path, case: CaseSelect, config: &PipelineConfig) -> Result<()> {
    let body = match case {
        CaseSelect::One => {
            serde_json::to_string_pretty(&single_file_report(input, config, Case::I)?)
        }
        CaseSelect::Two => {
            serde_json::to_string_pretty(&single_file_report(input, config, Case::II)?)
        }
        CaseSelect::Both => serde_json::to_string_pretty(&BothReport {
            case_i: single_file_report(input, config, Case::I)?,
            case_ii: single_file_report(input, config, Case::II)?,
        }),
    }
    .expect("report serializes");
    println!("{body}");
    Ok(())
}

/// Expand files and directories into a sorted list of WAV paths.
///
/// Explicit file paths are taken verbatim; directories are walked
/// recursively and filtered to `.wav` (case-insensitive), sorted by path
/// so runs are reproducible regardless of filesystem order.
pub fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found = Vec::new();
            for entry in walkdir::WalkDir::new(input).sort_by_file_name().into_iter() {
                let entry = entry.map_err(|e| Error::Io {
                    path: input.clone(),
                    source: e.into(),
                })?;
                if !entry.file_type().is_file() {
                    continue;
                }
                let is_wav = entry
                    .path()
                    .extension()
                    .map(|e| e.to_string_lossy().eq_ignore_ascii_case("wav"))
                    .unwrap_or(false);
                if is_wav {
                    found.push(entry.into_path());
                }
            }
            found.sort();
            files.extend(found);
        } else if input.exists() {
            files.push(input.clone());
        } else {
            return Err(Error::FileNotFound(input.clone()));
        }
    }
    if files.is_empty() {
        return Err(Error::NoInputFiles);
    }
    Ok(files)
}

fn summary_line(report: &CorrelationReport) -> String {
    let case = match report.case {
        Case::I => "I",
        Case::II => "II",
    };
    format!(
        "case {case}: mean={} variance={} n={} skipped={}",
        report.mean,
        report.variance,
        report.per_file.len(),
        report.skipped.len()
    )
}

/// Aggregate correlations over a corpus. With `--out` the report JSON (and
/// a manifest sidecar) go to disk and the summary to stdout; without it
/// the JSON goes to stdout and the summary to stderr.
pub fn cmd_report(
    inputs: &[PathBuf],
    case: CaseSelect,
    out: Option<&Path>,
    jobs: Option<usize>,
    config: &PipelineConfig,
    argv: &[String],
) -> Result<()> {
    let files = collect_inputs(inputs)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0)) // 0 = one thread per core
        .build()
        .map_err(|e| Error::InvalidConfig {
            field: "jobs",
            message: e.to_string(),
        })?;

    let run = |c: Case| pool.install(|| corpus_report(&files, config, c));
    let (body, summaries) = match case {
        CaseSelect::One => {
            let report = run(Case::I)?;
            let summary = summary_line(&report);
            (serde_json::to_string_pretty(&report), vec![summary])
        }
        CaseSelect::Two => {
            let report = run(Case::II)?;
            let summary = summary_line(&report);
            (serde_json::to_string_pretty(&report), vec![summary])
        }
        CaseSelect::Both => {
            let both = BothReport {
                case_i: run(Case::I)?,
                case_ii: run(Case::II)?,
            };
            let summaries = vec![summary_line(&both.case_i), summary_line(&both.case_ii)];
            (serde_json::to_string_pretty(&both), summaries)
        }
    };
    let body = body.expect("report serializes") + "\n";

    match out {
        Some(path) => {
            std::fs::write(path, &body).map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })?;
            RunManifest::new("report", argv, config, &files)?.write(&manifest_path(path))?;
            for line in summaries {
                println!("{line}");
            }
        }
        None => {
            print!("{body}");
            for line in summaries {
                eprintln!("{line}");
            }
        }
    }
    Ok(())
}

/// Bank metadata written alongside each weight matrix.
#[derive(Debug, Serialize)]
struct BankSidecar {
    n_filters: usize,
    n_bins: usize,
    bin_hz: f64,
    active_count: usize,
    centers_hz: Vec<f64>,
    edges_hz: Vec<f64>,
}

impl BankSidecar {
    fn of(bank: &MelFilterBank) -> Self {
        Self {
            n_filters: bank.n_filters(),
            n_bins: bank.n_bins(),
            bin_hz: bank.bin_hz,
            active_count: bank.active_count,
            centers_hz: bank.centers_hz.clone(),
            edges_hz: bank.edges_hz.clone(),
        }
    }
}

fn dump_bank(bank: &MelFilterBank, dir: &Path, stem: &str) -> Result<()> {
    write_matrix(
        bank.weights.view(),
        &dir.join(format!("{stem}.csv")),
        MatrixFormat::Csv,
    )?;
    write_json(&BankSidecar::of(bank), &dir.join(format!("{stem}.json")))
}

/// Pre-DCT log energies of both streams for one file, for plotting band
/// overlays. The modified trace includes the fill-in rows.
fn dump_energy_traces(
    signal: &AudioSignal,
    standard: &MelFilterBank,
    modified: &MelFilterBank,
    frame_len: usize,
    config: &PipelineConfig,
    dir: &Path,
) -> Result<()> {
    let hop = config.hop.samples(frame_len)?;
    let window = hamming_window(frame_len, config.window)?;
    let frames = frame_signal(&signal.samples, frame_len, hop, signal.sample_rate)?;
    let spectra = magnitude_spectrum(&apply_window(&frames, &window)?)?;
    let energies = log_mel_energies(standard, &spectra, config.log_floor)?;
    write_matrix(
        energies.values.view(),
        &dir.join("standard_energies.csv"),
        MatrixFormat::Csv,
    )?;

    let reduced = decimate(signal, config.alpha)?;
    let sub_len = frame_len / config.alpha;
    let sub_hop = config.hop.samples(sub_len)?;
    let sub_window = hamming_window(sub_len, config.window)?;
    let sub_frames = frame_signal(&reduced.samples, sub_len, sub_hop, reduced.sample_rate)?;
    let sub_spectra = magnitude_spectrum(&apply_window(&sub_frames, &sub_window)?)?;
    let sub_energies = log_mel_energies(modified, &sub_spectra, config.log_floor)?;
    let filled = fill_inactive_bands(&sub_energies, modified.active_count, config.fill_decay)?;
    write_matrix(
        filled.values.view(),
        &dir.join("modified_energies.csv"),
        MatrixFormat::Csv,
    )
}

/// Dump the standard and modified banks (weights as CSV, metadata as JSON)
/// into a directory, plus per-band log-energy traces when an input file is
/// given. The sample rate comes from the input file when present,
/// otherwise from `rate`.
pub fn cmd_fbdump(
    out_dir: &Path,
    input: Option<&Path>,
    rate: u32,
    config: &PipelineConfig,
    argv: &[String],
) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let signal = input.map(read_wav).transpose()?;
    let rate = signal.as_ref().map(|s| s.sample_rate).unwrap_or(rate);
    let frame_len = config.frame_len(rate)?;
    let spec = MelBankSpec {
        n_filters: config.n_filters,
        f_min_hz: config.f_min_hz,
        f_max_hz: config.f_max_hz,
        sample_rate: rate,
        n_bins: frame_len / 2 + 1,
    };
    let standard = build_filterbank(&spec)?;
    let modified = build_modified_filterbank(&spec, config.alpha)?;
    dump_bank(&standard, out_dir, "standard_bank")?;
    dump_bank(&modified, out_dir, "modified_bank")?;
    if let Some(signal) = &signal {
        dump_energy_traces(signal, &standard, &modified, frame_len, config, out_dir)?;
    }
    let inputs: Vec<PathBuf> = input.map(|p| p.to_path_buf()).into_iter().collect();
    RunManifest::new("fbdump", argv, config, &inputs)?.write(&out_dir.join("manifest.json"))
}
