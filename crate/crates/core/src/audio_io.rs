//! PCM audio ingestion and matrix serialization.
//!
//! Reads RIFF/WAVE files with integer (8/16/24/32-bit) or 32-bit float
//! encoding, reducing multi-channel input to channel 0 and scaling samples
//! to [-1, 1]. Feature matrices are written as CSV or JSON with enough
//! digits to round-trip exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use ndarray::ArrayView2;

use crate::error::{Error, Result};

/// A sampled waveform with its sampling rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioSignal {
    /// Amplitudes normalized to [-1, 1].
    pub samples: Vec<f64>,
    /// Sampling rate in Hz.
    pub sample_rate: u32,
}

impl AudioSignal {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Self {
        assert!(sample_rate > 0, "sample_rate must be positive");
        Self {
            samples,
            sample_rate,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Output format for [`write_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Json,
}

const WAVE_FORMAT_PCM: u16 = 0x0001;
const WAVE_FORMAT_IEEE_FLOAT: u16 = 0x0003;
const WAVE_FORMAT_EXTENSIBLE: u16 = 0xFFFE;

struct FmtChunk {
    format_tag: u16,
    channels: u16,
    sample_rate: u32,
    bits_per_sample: u16,
}

fn read_u16(bytes: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([bytes[at], bytes[at + 1]])
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]])
}

/// Read a PCM WAV file as a mono [`AudioSignal`].
///
/// Multi-channel input is reduced by taking channel 0. Integer samples are
/// scaled by the encoding's full-scale value (2^(bits-1)); float samples are
/// clamped to [-1, 1].
pub fn read_wav(path: &Path) -> Result<AudioSignal> {
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if bytes.is_empty() {
        return Err(Error::EmptyDataChunk(path.to_path_buf()));
    }

    let malformed = |detail: &str| Error::MalformedWav {
        path: path.to_path_buf(),
        detail: detail.to_string(),
    };

    if bytes.len() < 12 {
        return Err(malformed("file shorter than RIFF header"));
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(malformed("missing RIFF magic"));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(malformed("missing WAVE magic"));
    }

    // Walk the chunk list; fmt must precede data.
    let mut fmt: Option<FmtChunk> = None;
    let mut pos = 12usize;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let declared = read_u32(&bytes, pos + 4) as usize;
        let body = pos + 8;
        let avail = bytes.len() - body;

        if id == b"fmt " {
            if declared < 16 || avail < 16 {
                return Err(malformed("fmt chunk shorter than 16 bytes"));
            }
            let mut format_tag = read_u16(&bytes, body);
            let channels = read_u16(&bytes, body + 2);
            let sample_rate = read_u32(&bytes, body + 4);
            let bits_per_sample = read_u16(&bytes, body + 14);
            if format_tag == WAVE_FORMAT_EXTENSIBLE {
                // Actual format is the first two bytes of the SubFormat GUID.
                if declared < 40 || avail < 40 {
                    return Err(malformed("extensible fmt chunk shorter than 40 bytes"));
                }
                format_tag = read_u16(&bytes, body + 24);
            }
            if channels == 0 {
                return Err(malformed("zero channels"));
            }
            if sample_rate == 0 {
                return Err(malformed("zero sample rate"));
            }
            fmt = Some(FmtChunk {
                format_tag,
                channels,
                sample_rate,
                bits_per_sample,
            });
        } else if id == b"data" {
            let fmt = fmt.ok_or_else(|| malformed("data chunk before fmt chunk"))?;
            let size = declared.min(avail);
            if size == 0 {
                return Err(Error::EmptyDataChunk(path.to_path_buf()));
            }
            return decode_data(path, &fmt, &bytes[body..body + size]);
        }

        // Chunks are word-aligned: odd sizes carry one pad byte.
        pos = body + declared + (declared & 1);
    }

    Err(malformed("no data chunk"))
}

fn decode_data(path: &Path, fmt: &FmtChunk, data: &[u8]) -> Result<AudioSignal> {
    match fmt.format_tag {
        WAVE_FORMAT_PCM | WAVE_FORMAT_IEEE_FLOAT => {}
        tag => {
            return Err(Error::NonPcmWav {
                path: path.to_path_buf(),
                format_tag: tag,
            })
        }
    }

    let bytes_per_sample = match (fmt.format_tag, fmt.bits_per_sample) {
        (WAVE_FORMAT_PCM, 8) => 1,
        (WAVE_FORMAT_PCM, 16) => 2,
        (WAVE_FORMAT_PCM, 24) => 3,
        (WAVE_FORMAT_PCM, 32) => 4,
        (WAVE_FORMAT_IEEE_FLOAT, 32) => 4,
        (_, bits) => {
            return Err(Error::UnsupportedBitDepth {
                path: path.to_path_buf(),
                bits,
            })
        }
    };

    let stride = bytes_per_sample * fmt.channels as usize;
    let n_frames = data.len() / stride;
    if n_frames == 0 {
        return Err(Error::EmptyDataChunk(path.to_path_buf()));
    }

    let mut samples = Vec::with_capacity(n_frames);
    for frame in 0..n_frames {
        let at = frame * stride; // channel 0 sits at the frame start
        let v = match (fmt.format_tag, fmt.bits_per_sample) {
            (WAVE_FORMAT_PCM, 8) => (data[at] as i16 - 128) as f64 / 128.0,
            (WAVE_FORMAT_PCM, 16) => i16::from_le_bytes([data[at], data[at + 1]]) as f64 / 32768.0,
            (WAVE_FORMAT_PCM, 24) => {
                let raw = (data[at] as i32)
                    | ((data[at + 1] as i32) << 8)
                    | (((data[at + 2] as i8) as i32) << 16);
                raw as f64 / 8388608.0
            }
            (WAVE_FORMAT_PCM, 32) => {
                i32::from_le_bytes([data[at], data[at + 1], data[at + 2], data[at + 3]]) as f64
                    / 2147483648.0
            }
            (WAVE_FORMAT_IEEE_FLOAT, 32) => {
                let v = f32::from_le_bytes([data[at], data[at + 1], data[at + 2], data[at + 3]]);
                if !v.is_finite() {
                    return Err(Error::MalformedWav {
                        path: path.to_path_buf(),
                        detail: format!("non-finite float sample at frame {frame}"),
                    });
                }
                (v as f64).clamp(-1.0, 1.0)
            }
            _ => unreachable!(),
        };
        samples.push(v);
    }

    Ok(AudioSignal {
        samples,
        sample_rate: fmt.sample_rate,
    })
}

/// Write a mono 16-bit PCM WAV file. Samples are clamped to [-1, 1].
///
/// Mainly useful for generating fixtures and debugging pipelines; the
/// extraction path itself never writes audio.
pub fn write_wav(path: &Path, signal: &AudioSignal) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    let data_size = signal.samples.len() as u32 * 2;
    let byte_rate = signal.sample_rate * 2;

    w.write_all(b"RIFF").map_err(io_err)?;
    w.write_all(&(36 + data_size).to_le_bytes())
        .map_err(io_err)?;
    w.write_all(b"WAVE").map_err(io_err)?;
    w.write_all(b"fmt ").map_err(io_err)?;
    w.write_all(&16u32.to_le_bytes()).map_err(io_err)?;
    w.write_all(&WAVE_FORMAT_PCM.to_le_bytes())
        .map_err(io_err)?;
    w.write_all(&1u16.to_le_bytes()).map_err(io_err)?;
    w.write_all(&signal.sample_rate.to_le_bytes())
        .map_err(io_err)?;
    w.write_all(&byte_rate.to_le_bytes()).map_err(io_err)?;
    w.write_all(&2u16.to_le_bytes()).map_err(io_err)?;
    w.write_all(&16u16.to_le_bytes()).map_err(io_err)?;
    w.write_all(b"data").map_err(io_err)?;
    w.write_all(&data_size.to_le_bytes()).map_err(io_err)?;
    for &s in &signal.samples {
        let q = (s.clamp(-1.0, 1.0) * 32767.0).round() as i16;
        w.write_all(&q.to_le_bytes()).map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    Ok(())
}

/// Format a value with 17 significant digits, enough to round-trip any f64.
pub(crate) fn format_full(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serialize a matrix row-major to `path` as CSV (one matrix row per line)
/// or JSON (`{"rows", "cols", "data"}` with row-major nested arrays).
pub fn write_matrix(matrix: ArrayView2<'_, f64>, path: &Path, format: MatrixFormat) -> Result<()> {
    if matrix.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let mut body = String::new();
    match format {
        MatrixFormat::Csv => {
            for row in matrix.rows() {
                let line: Vec<String> = row.iter().map(|&v| format_full(v)).collect();
                body.push_str(&line.join(","));
                body.push('\n');
            }
        }
        MatrixFormat::Json => {
            body.push_str(&format!(
                "{{\"rows\":{},\"cols\":{},\"data\":[",
                matrix.nrows(),
                matrix.ncols()
            ));
            for (i, row) in matrix.rows().into_iter().enumerate() {
                if i > 0 {
                    body.push(',');
                }
                let line: Vec<String> = row.iter().map(|&v| format_full(v)).collect();
                body.push('[');
                body.push_str(&line.join(","));
                body.push(']');
            }
            body.push_str("]}\n");
        }
    }
    std::fs::write(path, body).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
