//! MFCC extraction for full-rate and integer-factor subsampled speech,
//! plus the correlation protocols that quantify how well the two feature
//! streams agree.
//!
//! The usual way to compute MFCCs of audio captured at a lower rate is to
//! redesign the filter bank for the new Nyquist interval, which changes
//! every band and makes the coefficients incomparable with full-rate ones.
//! This crate instead keeps the original bank's center frequencies and
//! bandwidths in Hz, evaluates them on the decimated signal's bin grid
//! (which has the same spacing, since frame length and rate shrink by the
//! same factor), zeroes the filters that fall above the reduced Nyquist,
//! and fills their log energies with a geometric decay of the last
//! surviving band. The result is a coefficient matrix with the same shape
//! as the full-rate one, correlated with it strongly enough to be used in
//! its place.
//!
//! # Pipeline
//!
//! ```text
//! waveform -> frames -> Hamming window -> |DFT| -> Mel bank -> ln -> DCT
//! ```
//!
//! [`cepstrum::mfcc_pipeline`] runs this chain at the recording rate;
//! [`cepstrum::mfcc_subsampled_pipeline`] runs it on a decimated waveform
//! with the reduced-Nyquist bank and band fill-in. [`eval::corpus_report`]
//! compares the two streams over a corpus with Pearson correlation, either
//! per file over concatenated frames (case I) or frame by frame (case II).
//!
//! # Example
//!
//! ```
//! use submel_core::{
//!     decimate, mfcc_pipeline, mfcc_subsampled_pipeline, compare_case1,
//!     AudioSignal, PipelineConfig,
//! };
//!
//! // A 440 Hz tone sampled at 16 kHz.
//! let samples: Vec<f64> = (0..16000)
//!     .map(|t| (2.0 * std::f64::consts::PI * 440.0 * t as f64 / 16000.0).sin())
//!     .collect();
//! let signal = AudioSignal::new(samples, 16000);
//!
//! let config = PipelineConfig::default(); // 30 bands, 32 ms frames, alpha = 2
//! let full = mfcc_pipeline(&signal, &config).unwrap();
//! let sub = mfcc_subsampled_pipeline(&decimate(&signal, config.alpha).unwrap(), &config).unwrap();
//! assert_eq!(full.coeffs.shape(), sub.coeffs.shape());
//!
//! // The tone sits far below the reduced Nyquist, so agreement is high.
//! let r = compare_case1(&full, &sub).unwrap();
//! assert!(r > 0.95);
//! ```

pub mod audio_io;
pub mod cepstrum;
pub mod dsp;
pub mod error;
pub mod eval;
pub mod melbank;
pub mod resample;

pub use audio_io::{read_wav, write_matrix, write_wav, AudioSignal, MatrixFormat};
pub use cepstrum::{
    dct_mfcc, fill_inactive_bands, log_mel_energies, mfcc_pipeline, mfcc_subsampled_pipeline,
    HopKind, MelLogSpectrum, MfccMatrix, PipelineConfig,
};
pub use dsp::{
    apply_window, frame_signal, hamming_window, magnitude_spectrum, FrameMatrix,
    MagnitudeSpectrogram, WindowKind,
};
pub use error::{Error, Result};
pub use eval::{
    compare_case1, compare_case2, corpus_report, file_correlation, pearson, Case, Case2Result,
    CorrelationReport, FileCorrelation, SkippedFile,
};
pub use melbank::{
    build_filterbank, build_modified_filterbank, center_frequencies, hz_to_mel, mel_to_hz,
    MelBankSpec, MelFilterBank,
};
pub use resample::{aliased_spectrum, decimate, decimate_lowpass, dft};
