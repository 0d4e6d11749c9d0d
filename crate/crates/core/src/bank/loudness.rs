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

//! Integrated loudness per ITU-R BS.1770-4 (mono).
//!
//! K-weighting is a high shelf followed by a high pass. Coefficients are
//! derived for the actual sample rate with the same parametrisation used by
//! pyloudnorm, which reproduces the tabulated 48 kHz values of the standard.
//! Gating uses 400 ms blocks with 75% overlap, an absolute gate at -70 LUFS
//! and a relative gate 10 LU below the absolutely-gated loudness.

use std::f64::consts::PI;

use crate::audio::Waveform;

/// Returned for signals with no block above the absolute gate.
pub const IMMEASURABLY_QUIET: f64 = f64::NEG_INFINITY;

pub const ABSOLUTE_GATE_LUFS: f64 = -70.0;
pub const RELATIVE_GATE_LU: f64 = -10.0;
const BLOCK_MS: f64 = 400.0;
const STEP_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LoudnessError {
    #[error("cannot measure the loudness of an empty waveform")]
    Empty,
}

/// Second-order IIR section, `a0` normalized to 1.
#[derive(Debug, Clone, Copy)]
struct Biquad {
    b: [f64; 3],
    a: [f64; 2],
}

impl Biquad {
    fn high_shelf(rate: f64) -> Biquad {
        let gain_db = 3.999_843_853_973_347;
        let q = 0.707_175_236_955_419_3;
        let fc = 1_681.974_450_955_532;
        let k = (PI * fc / rate).tan();
        let vh = 10f64.powf(gain_db / 20.0);
        let vb = vh.powf(0.499_666_774_154_541_6);
        let a0 = 1.0 + k / q + k * k;
        Biquad {
            b: [
                (vh + vb * k / q + k * k) / a0,
                2.0 * (k * k - vh) / a0,
                (vh - vb * k / q + k * k) / a0,
            ],
            a: [2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0],
        }
    }

    fn high_pass(rate: f64) -> Biquad {
        let q = 0.500_327_037_323_877_3;
        let fc = 38.135_470_876_139_82;
        let k = (PI * fc / rate).tan();
        let a0 = 1.0 + k / q + k * k;
        Biquad {
            b: [1.0, -2.0, 1.0],
            a: [2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0],
        }
    }

    fn run(&self, input: &[f64]) -> Vec<f64> {
        let (mut x1, mut x2, mut y1, mut y2) = (0.0, 0.0, 0.0, 0.0);
        input
            .iter()
            .map(|&x0| {
                let y0 = self.b[0] * x0 + self.b[1] * x1 + self.b[2] * x2 - self.a[0] * y1 - self.a[1] * y2;
                x2 = x1;
                x1 = x0;
                y2 = y1;
                y1 = y0;
                y0
            })
            .collect()
    }
}

/// Applies the two-stage K-weighting pre-filter.
pub fn k_weight(audio: &Waveform) -> Vec<f64> {
    let rate = audio.rate() as f64;
    let shelved = Biquad::high_shelf(rate).run(audio.samples());
    Biquad::high_pass(rate).run(&shelved)
}

fn block_loudness(mean_square: f64) -> f64 {
    -0.691 + 10.0 * mean_square.log10()
}

/// Mean square of the K-weighted signal over each gating block. A signal
/// shorter than one block is measured as a single block.
pub fn block_powers(audio: &Waveform) -> Vec<f64> {
    let weighted = k_weight(audio);
    let block = (BLOCK_MS * audio.rate() as f64 / 1000.0).round() as usize;
    let step = ((block as f64) * STEP_FRACTION).round() as usize;
    if weighted.len() < block {
        let ms = weighted.iter().map(|x| x * x).sum::<f64>() / weighted.len() as f64;
        return vec![ms];
    }
    let count = (weighted.len() - block) / step + 1;
    (0..count)
        .map(|j| {
            let s = &weighted[j * step..j * step + block];
            s.iter().map(|x| x * x).sum::<f64>() / block as f64
        })
        .collect()
}

/// Gated integrated loudness in LUFS.
pub fn measure_loudness(audio: &Waveform) -> Result<f64, LoudnessError> {
    if audio.is_empty() {
        return Err(LoudnessError::Empty);
    }
    let powers = block_powers(audio);
    let above_abs: Vec<f64> = powers
        .iter()
        .copied()
        .filter(|&z| block_loudness(z) > ABSOLUTE_GATE_LUFS)
        .collect();
    if above_abs.is_empty() {
        return Ok(IMMEASURABLY_QUIET);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let relative_gate = block_loudness(mean(&above_abs)) + RELATIVE_GATE_LU;
    let gated: Vec<f64> = above_abs
        .into_iter()
        .filter(|&z| block_loudness(z) > relative_gate)
        .collect();
    Ok(block_loudness(mean(&gated)))
}
