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

//! Spectral-centroid brightness classification.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::attributes::Brightness;
use crate::audio::{hann, Waveform};

pub const DEFAULT_DARK_MAX_HZ: f64 = 1500.0;
pub const DEFAULT_BRIGHT_MIN_HZ: f64 = 2000.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BrightnessError {
    #[error("cannot classify an empty waveform")]
    Empty,
    #[error("dark threshold {dark_max_hz} Hz must be below bright threshold {bright_min_hz} Hz")]
    Thresholds { dark_max_hz: f64, bright_min_hz: f64 },
}

/// Thresholds of the two-sided classification. Centroids between the two
/// are labelled [`Brightness::None`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BrightnessThresholds {
    pub dark_max_hz: f64,
    pub bright_min_hz: f64,
}

impl Default for BrightnessThresholds {
    fn default() -> Self {
        BrightnessThresholds {
            dark_max_hz: DEFAULT_DARK_MAX_HZ,
            bright_min_hz: DEFAULT_BRIGHT_MIN_HZ,
        }
    }
}

impl BrightnessThresholds {
    pub fn validate(&self) -> Result<(), BrightnessError> {
        if self.dark_max_hz < self.bright_min_hz {
            Ok(())
        } else {
            Err(BrightnessError::Thresholds {
                dark_max_hz: self.dark_max_hz,
                bright_min_hz: self.bright_min_hz,
            })
        }
    }

    pub fn label(&self, centroid_hz: f64) -> Brightness {
        if centroid_hz < self.dark_max_hz {
            Brightness::Dark
        } else if centroid_hz > self.bright_min_hz {
            Brightness::Bright
        } else {
            Brightness::None
        }
    }
}

/// Magnitude-weighted mean frequency of the Hann-windowed spectrum of the
/// whole sound, in Hz. The transform is zero-padded to a power of two.
pub fn spectral_centroid(audio: &Waveform) -> Result<f64, BrightnessError> {
    if audio.is_empty() {
        return Err(BrightnessError::Empty);
    }
    let n = audio.len();
    let size = n.next_power_of_two().max(2);
    let window = hann(n);
    let mut buf: Vec<Complex<f64>> = audio
        .samples()
        .iter()
        .zip(&window)
        .map(|(x, w)| Complex::new(x * w, 0.0))
        .collect();
    buf.resize(size, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(size).process(&mut buf);

    let bin_hz = audio.rate() as f64 / size as f64;
    let (weighted, total) = buf[..=size / 2]
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(wsum, msum), (k, c)| {
            let m = c.norm();
            (wsum + k as f64 * bin_hz * m, msum + m)
        });
    if total == 0.0 {
        Ok(0.0)
    } else {
        Ok(weighted / total)
    }
}

/// Computes the centroid and maps it to a label.
pub fn classify_brightness(
    audio: &Waveform,
    thresholds: BrightnessThresholds,
) -> Result<(Brightness, f64), BrightnessError> {
    thresholds.validate()?;
    let centroid = spectral_centroid(audio)?;
    Ok((thresholds.label(centroid), centroid))
}
