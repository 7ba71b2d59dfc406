//! Integer-factor subsampling and its spectral footprint.
//!
//! Decimation here is plain sample dropping — `y[s] = x[alpha * s]` — with
//! no anti-alias prefilter, because the downstream feature pipeline is
//! designed to consume the aliased spectrum directly. A windowed-sinc
//! variant is provided for callers who do want the classic
//! filter-then-drop behaviour, but nothing in the feature path uses it.
//!
//! The key identity (verified by the tests): for a length-`N` frame with
//! DFT `X`, the length-`S = N/alpha` DFT of the dropped-sample frame is
//!
//! ```text
//! Y(k) = (1/alpha) * sum_{l=0}^{alpha-1} X(k + l * S),   k = 0..S-1
//! ```
//!
//! i.e. the full-rate spectrum folds onto the shorter grid in `alpha`
//! equal-weight translates.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::audio_io::AudioSignal;
use crate::error::{Error, Result};

/// Drop all but every `alpha`-th sample. The sampling rate must be
/// divisible by `alpha` so the result's rate stays integral.
pub fn decimate(signal: &AudioSignal, alpha: usize) -> Result<AudioSignal> {
    if alpha == 0 {
        return Err(Error::InvalidAlpha);
    }
    if !(signal.sample_rate as usize).is_multiple_of(alpha) {
        return Err(Error::AlphaIncompatible {
            alpha,
            frame_len: signal.sample_rate as usize,
        });
    }
    Ok(AudioSignal {
        samples: signal.samples.iter().copied().step_by(alpha).collect(),
        sample_rate: signal.sample_rate / alpha as u32,
    })
}

/// Decimate after a linear-phase low-pass at the new Nyquist frequency
/// (Hamming-windowed sinc, `taps` coefficients, zero-phase via group-delay
/// compensation). Provided for comparison experiments only.
pub fn decimate_lowpass(signal: &AudioSignal, alpha: usize, taps: usize) -> Result<AudioSignal> {
    if alpha == 0 {
        return Err(Error::InvalidAlpha);
    }
    if alpha == 1 {
        return Ok(signal.clone());
    }
    if !(signal.sample_rate as usize).is_multiple_of(alpha) {
        return Err(Error::AlphaIncompatible {
            alpha,
            frame_len: signal.sample_rate as usize,
        });
    }
    let taps = if taps.is_multiple_of(2) {
        taps + 1
    } else {
        taps
    };
    let half = (taps / 2) as isize;
    let cutoff = 1.0 / alpha as f64; // fraction of the full-rate Nyquist
    let mut kernel = Vec::with_capacity(taps);
    let mut sum = 0.0;
    for i in 0..taps {
        let t = i as isize - half;
        let sinc = if t == 0 {
            cutoff
        } else {
            let x = std::f64::consts::PI * t as f64;
            (cutoff * x).sin() / x
        };
        let w = 0.54 - 0.46 * (2.0 * std::f64::consts::PI * i as f64 / (taps as f64 - 1.0)).cos();
        kernel.push(sinc * w);
        sum += sinc * w;
    }
    for k in kernel.iter_mut() {
        *k /= sum; // unit DC gain
    }

    let n = signal.samples.len();
    let filtered: Vec<f64> = (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for (j, &k) in kernel.iter().enumerate() {
                let t = i as isize + half - j as isize; // centered: zero group delay
                if (0..n as isize).contains(&t) {
                    acc += k * signal.samples[t as usize];
                }
            }
            acc
        })
        .collect();
    decimate(&AudioSignal::new(filtered, signal.sample_rate), alpha)
}

/// Full two-sided DFT of a real frame.
pub fn dft(frame: &[f64]) -> Result<Vec<Complex<f64>>> {
    if frame.is_empty() {
        return Err(Error::SignalTooShort {
            len: 0,
            frame_len: 0,
        });
    }
    let mut buf: Vec<Complex<f64>> = frame.iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new()
        .plan_fft_forward(frame.len())
        .process(&mut buf);
    Ok(buf)
}

/// Fold a full-rate two-sided spectrum onto the grid of its `alpha`-fold
/// decimation: `Y(k) = (1/alpha) sum_l X(k + l N/alpha)`.
///
/// The spectrum length must be divisible by `alpha`.
pub fn aliased_spectrum(spectrum: &[Complex<f64>], alpha: usize) -> Result<Vec<Complex<f64>>> {
    if alpha == 0 {
        return Err(Error::InvalidAlpha);
    }
    let n = spectrum.len();
    if n == 0 || !n.is_multiple_of(alpha) {
        return Err(Error::AlphaIncompatible {
            alpha,
            frame_len: n,
        });
    }
    let s = n / alpha;
    let scale = 1.0 / alpha as f64;
    Ok((0..s)
        .map(|k| {
            let mut acc = Complex::new(0.0, 0.0);
            for l in 0..alpha {
                acc += spectrum[k + l * s];
            }
            acc * scale
        })
        .collect())
}
