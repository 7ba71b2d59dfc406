//! Log-Mel energies, inactive-band fill-in, DCT, and the two end-to-end
//! MFCC pipelines.
//!
//! The full-rate pipeline is the classic chain: frame, window, magnitude
//! spectrum, triangular Mel bank, natural log, DCT. The subsampled pipeline
//! runs the same chain on an integer-factor decimated waveform using the
//! reduced-Nyquist filter bank from [`crate::melbank`], then fills the
//! filter outputs that no longer exist at the lower rate by geometrically
//! decaying the last active band's *log* energy before the DCT, so both
//! pipelines always emit the same number of coefficient rows.
//!
//! The DCT is the plain sum `Phi(r) = sum_m L(m) cos(r (2m - 1) pi / (2F))`
//! for `r = 1..F` with no orthonormal scaling. Two consequences worth
//! knowing: a log spectrum that is constant across bands yields all-zero
//! coefficients, and row `F` is always zero because its cosine factors
//! vanish on the half-shifted grid.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::audio_io::AudioSignal;
use crate::dsp::{
    apply_window, frame_signal, hamming_window, magnitude_spectrum, MagnitudeSpectrogram,
    WindowKind,
};
use crate::error::{Error, Result};
use crate::melbank::{build_filterbank, build_modified_filterbank, MelBankSpec, MelFilterBank};

/// Natural-log Mel band energies, one column per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct MelLogSpectrum {
    /// `n_filters x n_frames`.
    pub values: Array2<f64>,
}

/// Cepstral coefficients, one column per frame; row `r` holds the
/// `(r+1)`-th coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct MfccMatrix {
    /// `n_filters x n_frames`.
    pub coeffs: Array2<f64>,
}

impl MfccMatrix {
    pub fn n_coeffs(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn n_frames(&self) -> usize {
        self.coeffs.ncols()
    }
}

/// How the hop (frame advance) is derived from the frame length.
///
/// `Half` advances by exactly half a frame. `PaperLiteral` advances by one
/// sample less, reproducing a legacy indexing convention; for decimated
/// input the two feature streams then drift apart by a fraction of a
/// sample per frame, which is inherent to that convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HopKind {
    Half,
    PaperLiteral,
}

impl HopKind {
    /// Hop in samples for a frame of `frame_len` samples.
    pub fn samples(self, frame_len: usize) -> Result<usize> {
        let hop = match self {
            HopKind::Half => frame_len / 2,
            HopKind::PaperLiteral => (frame_len / 2).saturating_sub(1),
        };
        if hop == 0 {
            return Err(Error::ZeroHop);
        }
        Ok(hop)
    }
}

/// Everything needed to turn a waveform into MFCCs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Number of Mel filters and of cepstral coefficients.
    pub n_filters: usize,
    /// Analysis band lower edge in Hz.
    #[serde(rename = "f_min")]
    pub f_min_hz: f64,
    /// Analysis band upper edge in Hz.
    #[serde(rename = "f_max")]
    pub f_max_hz: f64,
    /// Frame duration in milliseconds.
    #[serde(rename = "frame_duration")]
    pub frame_duration_ms: f64,
    /// Frame advance rule.
    pub hop: HopKind,
    /// Window shape.
    pub window: WindowKind,
    /// Energies below this are clamped before the log.
    pub log_floor: f64,
    /// Integer subsampling factor.
    pub alpha: usize,
    /// Per-band geometric decay for filled-in log energies.
    pub fill_decay: f64,
}

impl Default for PipelineConfig {
    /// 30 filters over 130-6800 Hz, 32 ms frames with half-frame hop,
    /// standard Hamming window, 2x subsampling, 0.95 fill decay.
    fn default() -> Self {
        Self {
            n_filters: 30,
            f_min_hz: 130.0,
            f_max_hz: 6800.0,
            frame_duration_ms: 32.0,
            hop: HopKind::Half,
            window: WindowKind::Standard,
            log_floor: 1e-10,
            alpha: 2,
            fill_decay: 0.95,
        }
    }
}

impl PipelineConfig {
    /// Check rate-independent fields.
    pub fn validate(&self) -> Result<()> {
        if self.n_filters == 0 {
            return Err(Error::InvalidConfig {
                field: "n_filters",
                message: "must be at least 1".into(),
            });
        }
        if !self.frame_duration_ms.is_finite() || self.frame_duration_ms <= 0.0 {
            return Err(Error::InvalidConfig {
                field: "frame_duration",
                message: format!("{} ms is not a usable frame length", self.frame_duration_ms),
            });
        }
        if !self.log_floor.is_finite() || self.log_floor <= 0.0 {
            return Err(Error::InvalidConfig {
                field: "log_floor",
                message: "must be positive so logs stay finite".into(),
            });
        }
        if self.alpha == 0 {
            return Err(Error::InvalidAlpha);
        }
        if !self.fill_decay.is_finite() || self.fill_decay <= 0.0 || self.fill_decay > 1.0 {
            return Err(Error::InvalidConfig {
                field: "fill_decay",
                message: format!("{} is outside (0, 1]", self.fill_decay),
            });
        }
        Ok(())
    }

    /// Frame length in samples at `sample_rate`, after checking that the
    /// duration yields an even integer divisible by `alpha` with an even
    /// quotient (so the decimated frame also has an integral, even length).
    pub fn frame_len(&self, sample_rate: u32) -> Result<usize> {
        self.validate()?;
        let exact = self.frame_duration_ms * sample_rate as f64 / 1000.0;
        let rounded = exact.round();
        if (exact - rounded).abs() > 1e-6 || rounded < 2.0 {
            return Err(Error::InvalidConfig {
                field: "frame_duration",
                message: format!(
                    "{} ms at {} Hz is {exact} samples, not a whole frame",
                    self.frame_duration_ms, sample_rate
                ),
            });
        }
        let n = rounded as usize;
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidConfig {
                field: "frame_duration",
                message: format!("frame of {n} samples must be even"),
            });
        }
        if !n.is_multiple_of(self.alpha) || !(n / self.alpha).is_multiple_of(2) {
            return Err(Error::AlphaIncompatible {
                alpha: self.alpha,
                frame_len: n,
            });
        }
        Ok(n)
    }

    fn bank_spec(&self, sample_rate: u32, frame_len: usize) -> MelBankSpec {
        MelBankSpec {
            n_filters: self.n_filters,
            f_min_hz: self.f_min_hz,
            f_max_hz: self.f_max_hz,
            sample_rate,
            n_bins: frame_len / 2 + 1,
        }
    }
}

/// Multiply the filter bank into a magnitude spectrogram and take natural
/// logs: entry `(m, p) = ln(max(sum_k M(m,k) |X_p(k)|, log_floor))`.
///
/// The bank weights *magnitudes*, not powers.
pub fn log_mel_energies(
    bank: &MelFilterBank,
    spectrogram: &MagnitudeSpectrogram,
    log_floor: f64,
) -> Result<MelLogSpectrum> {
    if bank.n_bins() != spectrogram.n_bins() {
        return Err(Error::BankDimensionMismatch {
            bank: bank.n_bins(),
            bins: spectrogram.n_bins(),
        });
    }
    if !log_floor.is_finite() || log_floor <= 0.0 {
        return Err(Error::InvalidConfig {
            field: "log_floor",
            message: "must be positive so logs stay finite".into(),
        });
    }
    let mut values = bank.weights.dot(&spectrogram.mags);
    values.mapv_inplace(|e| e.max(log_floor).ln());
    Ok(MelLogSpectrum { values })
}

/// Replace the bands a subsampled spectrum cannot populate. Rows `1..=
/// active_count` (1-based) pass through; row `m > active_count` becomes
/// `fill_decay^(m - active_count)` times row `active_count`, element-wise
/// per frame. The decay multiplies *log* energies, so negative logs shrink
/// toward zero; that is the intended behaviour, not a bug.
pub fn fill_inactive_bands(
    spectrum: &MelLogSpectrum,
    active_count: usize,
    fill_decay: f64,
) -> Result<MelLogSpectrum> {
    let n_filters = spectrum.values.nrows();
    if active_count == 0 || active_count > n_filters {
        return Err(Error::ActiveCountOutOfRange {
            active: active_count,
            total: n_filters,
        });
    }
    let mut values = spectrum.values.clone();
    let last_active = spectrum.values.row(active_count - 1);
    for m in active_count..n_filters {
        let factor = fill_decay.powi((m + 1 - active_count) as i32);
        values.row_mut(m).assign(&last_active.mapv(|v| factor * v));
    }
    Ok(MelLogSpectrum { values })
}

/// The `F x F` cosine matrix `B[r, m] = cos((r+1) (2m+1) pi / (2F))`
/// applied by [`dct_mfcc`] (0-based indices shown).
fn dct_basis(n_filters: usize) -> Array2<f64> {
    Array2::from_shape_fn((n_filters, n_filters), |(r, m)| {
        ((r + 1) as f64 * (2 * m + 1) as f64 * std::f64::consts::PI / (2.0 * n_filters as f64))
            .cos()
    })
}

/// Apply the plain cosine transform to every frame.
pub fn dct_mfcc(spectrum: &MelLogSpectrum) -> Result<MfccMatrix> {
    if spectrum.values.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let basis = dct_basis(spectrum.values.nrows());
    Ok(MfccMatrix {
        coeffs: basis.dot(&spectrum.values),
    })
}

/// Full-rate MFCCs: frame, window, magnitude spectrum, Mel bank, log, DCT.
pub fn mfcc_pipeline(signal: &AudioSignal, config: &PipelineConfig) -> Result<MfccMatrix> {
    let n = config.frame_len(signal.sample_rate)?;
    let hop = config.hop.samples(n)?;
    let frames = frame_signal(&signal.samples, n, hop, signal.sample_rate)?;
    let window = hamming_window(n, config.window)?;
    let spectrogram = magnitude_spectrum(&apply_window(&frames, &window)?)?;
    let bank = build_filterbank(&config.bank_spec(signal.sample_rate, n))?;
    let energies = log_mel_energies(&bank, &spectrogram, config.log_floor)?;
    dct_mfcc(&energies)
}

/// MFCCs of an already-decimated waveform (`signal.sample_rate` is the
/// *reduced* rate, i.e. original rate / `config.alpha`).
///
/// Frames keep the configured duration in milliseconds, so they shorten to
/// `N / alpha` samples; the reduced-Nyquist bank drops the top filters and
/// [`fill_inactive_bands`] restores the row count before the DCT. With
/// `alpha = 1` this is exactly [`mfcc_pipeline`].
pub fn mfcc_subsampled_pipeline(
    signal: &AudioSignal,
    config: &PipelineConfig,
) -> Result<MfccMatrix> {
    let original_rate = signal.sample_rate * config.alpha as u32;
    let n_full = config.frame_len(original_rate)?;
    let n_sub = n_full / config.alpha;
    let hop = config.hop.samples(n_sub)?;
    let frames = frame_signal(&signal.samples, n_sub, hop, signal.sample_rate)?;
    let window = hamming_window(n_sub, config.window)?;
    let spectrogram = magnitude_spectrum(&apply_window(&frames, &window)?)?;
    let bank = build_modified_filterbank(&config.bank_spec(original_rate, n_full), config.alpha)?;
    let energies = log_mel_energies(&bank, &spectrogram, config.log_floor)?;
    let filled = fill_inactive_bands(&energies, bank.active_count, config.fill_decay)?;
    dct_mfcc(&filled)
}
