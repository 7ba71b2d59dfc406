//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

/// Errors produced by signal ingestion, feature extraction, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed wav header in {path}: {detail}")]
    MalformedWav { path: PathBuf, detail: String },

    #[error("unsupported wav encoding in {path}: format tag {format_tag} (only PCM and IEEE float are supported)")]
    NonPcmWav { path: PathBuf, format_tag: u16 },

    #[error("unsupported pcm bit depth {bits} in {path}")]
    UnsupportedBitDepth { path: PathBuf, bits: u16 },

    #[error("empty data chunk in {0}")]
    EmptyDataChunk(PathBuf),

    #[error("matrix is empty")]
    EmptyMatrix,

    #[error("signal has {len} samples, shorter than one frame of {frame_len}")]
    SignalTooShort { len: usize, frame_len: usize },

    #[error("hop must be at least 1 sample")]
    ZeroHop,

    #[error("window length must be at least 2, got {0}")]
    WindowTooShort(usize),

    #[error("window length {window} does not match frame length {frame}")]
    WindowMismatch { window: usize, frame: usize },

    #[error("filter bank has {bank} columns but spectrogram has {bins} bins")]
    BankDimensionMismatch { bank: usize, bins: usize },

    #[error("frequency must be non-negative, got {0}")]
    NegativeFrequency(f64),

    #[error("mel value must be non-negative, got {0}")]
    NegativeMel(f64),

    #[error("invalid config: {field}: {message}")]
    InvalidConfig {
        field: &'static str,
        message: String,
    },

    #[error("subsampling factor must be >= 1")]
    InvalidAlpha,

    #[error("subsampling factor {alpha} does not evenly subdivide frame length {frame_len}")]
    AlphaIncompatible { alpha: usize, frame_len: usize },

    #[error("active filter count {active} out of range 1..={total}")]
    ActiveCountOutOfRange { active: usize, total: usize },

    #[error("vectors have different lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("correlation needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("zero variance: correlation undefined")]
    ZeroVariance,

    #[error("coefficient row counts differ: {left} vs {right}")]
    RowCountMismatch { left: usize, right: usize },

    #[error("all {0} frames are degenerate; per-frame correlation undefined")]
    AllFramesDegenerate(usize),

    #[error("no input files")]
    NoInputFiles,

    #[error("all {0} input files failed")]
    AllFilesFailed(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
