//! Framing, windowing, and magnitude spectra.
//!
//! A signal is cut into overlapping frames (columns of an `N x P` matrix),
//! each frame is tapered by a Hamming window, and the one-sided DFT
//! magnitude is computed per frame. All arithmetic is `f64`.

use ndarray::{Array1, Array2};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which Hamming variant to apply.
///
/// `Standard` is the symmetric window w[n] = 0.54 - 0.46 cos(2 pi n / (N-1)).
/// `PaperLiteral` is the asymmetric half-cosine variant
/// w[n] = 0.54 - 0.46 cos(n pi / N), which rises from 0.08 at n = 0 but
/// never comes back down; it is provided for reproducing legacy outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    Standard,
    PaperLiteral,
}

/// Overlapping frames of a signal, stored column-per-frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatrix {
    /// `frame_len x n_frames`; column `p` holds samples
    /// `x[p*hop .. p*hop + frame_len]`.
    pub frames: Array2<f64>,
    pub frame_len: usize,
    pub hop: usize,
    pub sample_rate: u32,
}

impl FrameMatrix {
    pub fn n_frames(&self) -> usize {
        self.frames.ncols()
    }
}

/// One-sided magnitude spectra, stored column-per-frame.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeSpectrogram {
    /// `(frame_len/2 + 1) x n_frames`; row `k` is `|X(k)|`.
    pub mags: Array2<f64>,
    /// Width of one DFT bin in Hz (`sample_rate / frame_len`).
    pub bin_hz: f64,
}

impl MagnitudeSpectrogram {
    pub fn n_bins(&self) -> usize {
        self.mags.nrows()
    }

    pub fn n_frames(&self) -> usize {
        self.mags.ncols()
    }
}

/// Cut `samples` into overlapping frames of `frame_len` samples advancing by
/// `hop`. Yields `floor((len - frame_len)/hop) + 1` frames; a trailing
/// remainder shorter than a frame is dropped.
pub fn frame_signal(
    samples: &[f64],
    frame_len: usize,
    hop: usize,
    sample_rate: u32,
) -> Result<FrameMatrix> {
    if hop == 0 {
        return Err(Error::ZeroHop);
    }
    if frame_len == 0 || samples.len() < frame_len {
        return Err(Error::SignalTooShort {
            len: samples.len(),
            frame_len,
        });
    }
    let n_frames = (samples.len() - frame_len) / hop + 1;
    let mut frames = Array2::zeros((frame_len, n_frames));
    for p in 0..n_frames {
        let start = p * hop;
        for n in 0..frame_len {
            frames[[n, p]] = samples[start + n];
        }
    }
    Ok(FrameMatrix {
        frames,
        frame_len,
        hop,
        sample_rate,
    })
}

/// Build a Hamming window of `len` samples (`len >= 2`).
pub fn hamming_window(len: usize, kind: WindowKind) -> Result<Array1<f64>> {
    if len < 2 {
        return Err(Error::WindowTooShort(len));
    }
    let w = match kind {
        WindowKind::Standard => Array1::from_shape_fn(len, |n| {
            0.54 - 0.46 * (2.0 * std::f64::consts::PI * n as f64 / (len as f64 - 1.0)).cos()
        }),
        WindowKind::PaperLiteral => Array1::from_shape_fn(len, |n| {
            0.54 - 0.46 * (n as f64 * std::f64::consts::PI / len as f64).cos()
        }),
    };
    Ok(w)
}

/// Multiply every frame (column) by `window` element-wise.
pub fn apply_window(frames: &FrameMatrix, window: &Array1<f64>) -> Result<FrameMatrix> {
    if window.len() != frames.frame_len {
        return Err(Error::WindowMismatch {
            window: window.len(),
            frame: frames.frame_len,
        });
    }
    let mut out = frames.frames.clone();
    for mut col in out.columns_mut() {
        col *= window;
    }
    Ok(FrameMatrix {
        frames: out,
        ..*frames
    })
}

/// Compute one-sided DFT magnitudes `|X(k)|`, k = 0 ..= frame_len/2, for
/// every frame. One FFT plan is built and reused across frames.
pub fn magnitude_spectrum(frames: &FrameMatrix) -> Result<MagnitudeSpectrogram> {
    let n = frames.frame_len;
    if n == 0 {
        return Err(Error::SignalTooShort {
            len: 0,
            frame_len: 0,
        });
    }
    let n_bins = n / 2 + 1;
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut mags = Array2::zeros((n_bins, frames.n_frames()));
    let mut buf: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); n];
    for (p, col) in frames.frames.columns().into_iter().enumerate() {
        for (b, &v) in buf.iter_mut().zip(col.iter()) {
            *b = Complex::new(v, 0.0);
        }
        fft.process(&mut buf);
        for k in 0..n_bins {
            mags[[k, p]] = buf[k].norm();
        }
    }
    Ok(MagnitudeSpectrogram {
        mags,
        bin_hz: frames.sample_rate as f64 / n as f64,
    })
}
