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

//! Mono sample buffers.

use serde::{Deserialize, Serialize};

/// The only sample rate the pipeline works at.
pub const SAMPLE_RATE: u32 = 48_000;

/// Mono audio with samples normalized to [-1, +1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Waveform {
    samples: Vec<f64>,
    rate: u32,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WaveformError {
    #[error("sample rate must be positive")]
    ZeroRate,
    #[error("sample {index} = {value} is outside [-1, 1]")]
    OutOfRange { index: usize, value: f64 },
}

impl Waveform {
    /// Validating constructor.
    pub fn new(samples: Vec<f64>, rate: u32) -> Result<Waveform, WaveformError> {
        if rate == 0 {
            return Err(WaveformError::ZeroRate);
        }
        if let Some((index, &value)) = samples.iter().enumerate().find(|(_, x)| !(-1.0..=1.0).contains(*x)) {
            return Err(WaveformError::OutOfRange { index, value });
        }
        Ok(Waveform { samples, rate })
    }

    /// Builds a waveform by hard-clamping every sample into [-1, +1].
    /// Returns the number of samples that had to be clamped.
    pub fn clamped(mut samples: Vec<f64>, rate: u32) -> (Waveform, usize) {
        assert!(rate > 0, "sample rate must be positive");
        let mut clipped = 0;
        for x in samples.iter_mut() {
            if *x > 1.0 || *x < -1.0 || x.is_nan() {
                *x = if x.is_nan() { 0.0 } else { x.clamp(-1.0, 1.0) };
                clipped += 1;
            }
        }
        (Waveform { samples, rate }, clipped)
    }

    pub fn silence(len: usize, rate: u32) -> Waveform {
        Waveform::clamped(vec![0.0; len], rate).0
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn rate(&self) -> u32 {
        self.rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_ms(&self) -> f64 {
        self.samples.len() as f64 * 1000.0 / self.rate as f64
    }

    /// Contiguous sub-range of the samples.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Waveform {
        Waveform {
            samples: self.samples[range].to_vec(),
            rate: self.rate,
        }
    }

    /// Multiplies every sample by `gain`, clamping the result.
    pub fn scaled(&self, gain: f64) -> Waveform {
        Waveform::clamped(self.samples.iter().map(|x| x * gain).collect(), self.rate).0
    }

    /// Rounds every sample to the nearest step of a signed 16-bit grid.
    pub fn quantized_16(&self) -> Waveform {
        Waveform {
            samples: self.samples.iter().map(|&x| quantize_16(x)).collect(),
            rate: self.rate,
        }
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Number of samples covering `ms` milliseconds at `rate`, rounded to nearest.
pub fn ms_to_samples(ms: f64, rate: u32) -> usize {
    (ms * rate as f64 / 1000.0).round() as usize
}

/// Symmetric Hann window of length `n`.
pub fn hann(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos())
        .collect()
}

/// Round-to-nearest onto the 16-bit grid, clamped at full scale.
pub fn quantize_16(x: f64) -> f64 {
    to_i16(x) as f64 / 32768.0
}

/// 16-bit PCM code for a normalized sample.
pub fn to_i16(x: f64) -> i16 {
    (x * 32768.0).round().clamp(-32768.0, 32767.0) as i16
}
