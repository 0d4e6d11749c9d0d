// Copyright 2026 The aqagen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Log-magnitude short-time Fourier transform.

use std::io::Write;
use std::path::Path;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::RenderError;
use crate::audio::{hann, ms_to_samples, Waveform};

/// Added to magnitudes before taking the log; silence maps to -200 dB.
pub const LOG_EPSILON: f64 = 1e-10;
/// Magic bytes at the start of an exported spectrogram.
pub const SPECTROGRAM_MAGIC: &[u8; 8] = b"AQASPEC1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StftParams {
    pub window_ms: f64,
    pub hop_ms: f64,
    /// Transform length; must be at least the window length in samples.
    pub fft_size: usize,
}

impl Default for StftParams {
    fn default() -> Self {
        StftParams {
            window_ms: 25.0,
            hop_ms: 10.0,
            fft_size: 2048,
        }
    }
}

/// Time-major matrix of `20 log10(|X| + eps)` values.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub frames: usize,
    pub bins: usize,
    pub values: Vec<f32>,
    pub stft: StftParams,
}

impl Spectrogram {
    pub fn frame(&self, t: usize) -> &[f32] {
        &self.values[t * self.bins..(t + 1) * self.bins]
    }

    pub fn bin_hz(&self, rate: u32) -> f64 {
        rate as f64 / self.stft.fft_size as f64
    }

    /// Binary export: magic, frame count and bin count as little-endian
    /// `u32`, then `frames * bins` little-endian `f32` values, frame-major.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 4 * self.values.len());
        out.extend_from_slice(SPECTROGRAM_MAGIC);
        out.extend_from_slice(&(self.frames as u32).to_le_bytes());
        out.extend_from_slice(&(self.bins as u32).to_le_bytes());
        for v in &self.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], stft: StftParams) -> Option<Spectrogram> {
        if bytes.len() < 16 || &bytes[..8] != SPECTROGRAM_MAGIC {
            return None;
        }
        let frames = u32::from_le_bytes(bytes[8..12].try_into().ok()?) as usize;
        let bins = u32::from_le_bytes(bytes[12..16].try_into().ok()?) as usize;
        let body = &bytes[16..];
        if body.len() != 4 * frames * bins {
            return None;
        }
        let values = body
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Some(Spectrogram {
            frames,
            bins,
            values,
            stft,
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), RenderError> {
        let io = |source| RenderError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut f = std::fs::File::create(path).map_err(io)?;
        f.write_all(&self.to_bytes()).map_err(io)
    }
}

pub fn compute_spectrogram(audio: &Waveform, stft: StftParams) -> Result<Spectrogram, RenderError> {
    if !(stft.hop_ms > 0.0 && stft.window_ms >= stft.hop_ms) {
        return Err(RenderError::Feature(format!(
            "need window_ms >= hop_ms > 0, got {} / {}",
            stft.window_ms, stft.hop_ms
        )));
    }
    let win = ms_to_samples(stft.window_ms, audio.rate()).max(1);
    let hop = ms_to_samples(stft.hop_ms, audio.rate()).max(1);
    if stft.fft_size < win {
        return Err(RenderError::Feature(format!(
            "fft size {} shorter than the {win}-sample window",
            stft.fft_size
        )));
    }
    if audio.len() < win {
        return Err(RenderError::Feature(format!(
            "audio of {} samples is shorter than one {win}-sample window",
            audio.len()
        )));
    }
    let frames = 1 + (audio.len() - win) / hop;
    let bins = stft.fft_size / 2 + 1;
    let window = hann(win);
    let fft = FftPlanner::new().plan_fft_forward(stft.fft_size);
    let mut values = Vec::with_capacity(frames * bins);
    let mut buf = vec![Complex::new(0.0, 0.0); stft.fft_size];
    for t in 0..frames {
        let frame = &audio.samples()[t * hop..t * hop + win];
        buf.iter_mut().for_each(|c| *c = Complex::new(0.0, 0.0));
        for ((c, x), w) in buf.iter_mut().zip(frame).zip(&window) {
            c.re = x * w;
        }
        fft.process(&mut buf);
        values.extend(
            buf[..bins]
                .iter()
                .map(|c| (20.0 * (c.norm() + LOG_EPSILON).log10()) as f32),
        );
    }
    Ok(Spectrogram {
        frames,
        bins,
        values,
        stft,
    })
}
