//! Triangular Mel filter banks for full-rate and subsampled spectra.
//!
//! Filter centers are spaced uniformly on the Mel scale between `f_min` and
//! `f_max`; each filter is a triangle (in Hz) rising from the previous
//! center to 1.0 at its own center and falling to the next one. The
//! subsampled variant keeps every center and bandwidth *in Hz* and evaluates
//! the same triangles on the shorter bin grid of a decimated signal, which
//! has the same bin spacing because window length and sampling rate shrink
//! by the same factor. Filters whose center lies at or above the reduced
//! Nyquist frequency are zeroed; the count of surviving filters is exposed
//! as `active_count` so the cepstral stage can fill in the missing bands.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Parameters describing a filter bank over a one-sided spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MelBankSpec {
    /// Number of filters (rows).
    pub n_filters: usize,
    /// Lower edge of the analysis band in Hz.
    pub f_min_hz: f64,
    /// Upper edge of the analysis band in Hz.
    pub f_max_hz: f64,
    /// Sampling rate of the *full-rate* signal in Hz.
    pub sample_rate: u32,
    /// Number of one-sided spectrum bins (`fft_len / 2 + 1`).
    pub n_bins: usize,
}

impl MelBankSpec {
    /// The frame length implied by the one-sided bin count.
    pub fn fft_len(&self) -> usize {
        2 * (self.n_bins - 1)
    }

    /// Width of one DFT bin in Hz.
    pub fn bin_hz(&self) -> f64 {
        self.sample_rate as f64 / self.fft_len() as f64
    }

    fn validate(&self) -> Result<()> {
        if self.n_filters == 0 {
            return Err(Error::InvalidConfig {
                field: "n_filters",
                message: "must be at least 1".into(),
            });
        }
        if self.n_bins < 2 {
            return Err(Error::InvalidConfig {
                field: "n_bins",
                message: "need at least 2 one-sided bins".into(),
            });
        }
        if self.sample_rate == 0 {
            return Err(Error::InvalidConfig {
                field: "sample_rate",
                message: "must be positive".into(),
            });
        }
        if !self.f_min_hz.is_finite() || self.f_min_hz < 0.0 {
            return Err(Error::InvalidConfig {
                field: "f_min_hz",
                message: format!("{} is not a valid lower edge", self.f_min_hz),
            });
        }
        if !self.f_max_hz.is_finite() || self.f_max_hz <= self.f_min_hz {
            return Err(Error::InvalidConfig {
                field: "f_max_hz",
                message: format!(
                    "{} must exceed the lower edge {}",
                    self.f_max_hz, self.f_min_hz
                ),
            });
        }
        let nyquist = self.sample_rate as f64 / 2.0;
        if self.f_max_hz > nyquist {
            return Err(Error::InvalidConfig {
                field: "f_max_hz",
                message: format!("{} exceeds the Nyquist frequency {nyquist}", self.f_max_hz),
            });
        }
        Ok(())
    }
}

/// A realized triangular filter bank.
#[derive(Debug, Clone, PartialEq)]
pub struct MelFilterBank {
    /// `n_filters x n_bins` weights in [0, 1].
    pub weights: Array2<f64>,
    /// Center frequency of each filter in Hz (length `n_filters`).
    pub centers_hz: Vec<f64>,
    /// The full edge/center grid in Hz (length `n_filters + 2`), from the
    /// band's lower edge through every center to the upper edge.
    pub edges_hz: Vec<f64>,
    /// Number of leading filters with nonzero passband. Equal to
    /// `n_filters` for a full-rate bank; possibly smaller for a bank built
    /// against a subsampled spectrum.
    pub active_count: usize,
    /// Width of one spectrum bin in Hz.
    pub bin_hz: f64,
}

impl MelFilterBank {
    pub fn n_filters(&self) -> usize {
        self.weights.nrows()
    }

    pub fn n_bins(&self) -> usize {
        self.weights.ncols()
    }
}

/// Map frequency in Hz to the Mel scale: `2595 log10(1 + f / 700)`.
pub fn hz_to_mel(hz: f64) -> Result<f64> {
    if !hz.is_finite() || hz < 0.0 {
        return Err(Error::NegativeFrequency(hz));
    }
    Ok(2595.0 * (1.0 + hz / 700.0).log10())
}

/// Invert [`hz_to_mel`]: `700 (10^(mel / 2595) - 1)`.
pub fn mel_to_hz(mel: f64) -> Result<f64> {
    if !mel.is_finite() || mel < 0.0 {
        return Err(Error::NegativeMel(mel));
    }
    Ok(700.0 * (10f64.powf(mel / 2595.0) - 1.0))
}

/// Compute the `n_filters + 2` grid of band edges and filter centers in Hz.
///
/// The grid is uniform in Mel: point `m` sits at
/// `mel(f_min) + m * (mel(f_max) - mel(f_min)) / (n_filters + 1)`.
/// Endpoints are mapped back through the Mel round trip rather than pinned
/// to the configured edges, so they may differ from `f_min`/`f_max` in the
/// last few digits.
pub fn center_frequencies(n_filters: usize, f_min_hz: f64, f_max_hz: f64) -> Result<Vec<f64>> {
    if n_filters == 0 {
        return Err(Error::InvalidConfig {
            field: "n_filters",
            message: "must be at least 1".into(),
        });
    }
    let mel_min = hz_to_mel(f_min_hz)?;
    let mel_max = hz_to_mel(f_max_hz)?;
    if mel_max <= mel_min {
        return Err(Error::InvalidConfig {
            field: "f_max_hz",
            message: format!("{f_max_hz} must exceed the lower edge {f_min_hz}"),
        });
    }
    let delta = (mel_max - mel_min) / (n_filters as f64 + 1.0);
    (0..=n_filters + 1)
        .map(|m| mel_to_hz(mel_min + m as f64 * delta))
        .collect()
}

/// Write one triangle into `row`: rising from `lo` to `mid`, falling from
/// `mid` to `hi`, evaluated at bin frequencies `l * bin_hz`.
fn fill_triangle_row(row: &mut [f64], lo: f64, mid: f64, hi: f64, bin_hz: f64) {
    for (l, w) in row.iter_mut().enumerate() {
        let f = l as f64 * bin_hz;
        *w = if f < lo || f >= hi {
            0.0
        } else if f < mid {
            (f - lo) / (mid - lo)
        } else {
            (f - hi) / (mid - hi)
        };
    }
}

fn assemble_bank(grid: &[f64], n_bins: usize, bin_hz: f64, active_count: usize) -> MelFilterBank {
    let n_filters = grid.len() - 2;
    let mut weights = Array2::zeros((n_filters, n_bins));
    for m in 0..active_count {
        let row = weights.row_mut(m).into_slice().expect("row is contiguous");
        fill_triangle_row(row, grid[m], grid[m + 1], grid[m + 2], bin_hz);
        if row.iter().all(|&w| w == 0.0) {
            log::warn!(
                "filter {} ({:.1} Hz) covers no spectrum bin; consider fewer \
                 filters or a longer frame",
                m + 1,
                grid[m + 1]
            );
        }
    }
    MelFilterBank {
        weights,
        centers_hz: grid[1..=n_filters].to_vec(),
        edges_hz: grid.to_vec(),
        active_count,
        bin_hz,
    }
}

/// Build the full-rate triangular filter bank described by `spec`.
pub fn build_filterbank(spec: &MelBankSpec) -> Result<MelFilterBank> {
    spec.validate()?;
    let grid = center_frequencies(spec.n_filters, spec.f_min_hz, spec.f_max_hz)?;
    Ok(assemble_bank(
        &grid,
        spec.n_bins,
        spec.bin_hz(),
        spec.n_filters,
    ))
}

/// Build the filter bank for a signal decimated by `alpha`, keeping every
/// center and bandwidth in Hz from the full-rate design.
///
/// The decimated frame has `fft_len / alpha` samples at `sample_rate /
/// alpha` Hz, so its bins sit at the same multiples of `bin_hz` as the
/// full-rate spectrum — just fewer of them (`fft_len / (2 alpha) + 1`,
/// ending exactly at the reduced Nyquist). Filters centered at or above
/// that Nyquist are zeroed and excluded from `active_count`.
///
/// `alpha` must divide the frame length and leave an even quotient;
/// `alpha = 1` reproduces [`build_filterbank`] bit for bit.
pub fn build_modified_filterbank(spec: &MelBankSpec, alpha: usize) -> Result<MelFilterBank> {
    spec.validate()?;
    if alpha == 0 {
        return Err(Error::InvalidAlpha);
    }
    let fft_len = spec.fft_len();
    if !fft_len.is_multiple_of(alpha) || !(fft_len / alpha).is_multiple_of(2) {
        return Err(Error::AlphaIncompatible {
            alpha,
            frame_len: fft_len,
        });
    }
    let sub_bins = fft_len / alpha / 2 + 1;
    let sub_nyquist = spec.sample_rate as f64 / (2.0 * alpha as f64);
    let grid = center_frequencies(spec.n_filters, spec.f_min_hz, spec.f_max_hz)?;
    let active_count = grid[1..=spec.n_filters]
        .iter()
        .take_while(|&&c| c < sub_nyquist)
        .count();
    Ok(assemble_bank(&grid, sub_bins, spec.bin_hz(), active_count))
}
