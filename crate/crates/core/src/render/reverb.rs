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

//! Schroeder reverberator: four parallel feedback combs into two series
//! all-pass sections, mixed with the dry signal.
//!
//! Each comb's feedback is `g = 10^(-3 d / T60)` so every recirculation
//! path decays 60 dB in the target time. Delay lengths scale with the
//! target so the echo density, and with it the shape of the decay curve,
//! stays the same across the supported range.

use super::RenderError;
use crate::audio::Waveform;
use crate::scene::REVERB_RT60_RANGE_MS;

/// Comb delays at the reference reverberation time, in ms.
const COMB_DELAYS_MS: [f64; 4] = [29.7, 37.1, 41.1, 43.7];
const ALLPASS_DELAYS_MS: [f64; 2] = [5.0, 1.7];
const ALLPASS_GAIN: f64 = 0.7;
const REFERENCE_RT60_MS: f64 = 400.0;
const WET_GAIN: f64 = 0.5;
/// Tail appended to the output, as a multiple of the target time.
const TAIL_FACTOR: f64 = 2.0;

fn delay_samples(ms: f64, rt60_ms: f64, rate: u32) -> usize {
    ((ms * rt60_ms / REFERENCE_RT60_MS) * rate as f64 / 1000.0)
        .round()
        .max(1.0) as usize
}

fn comb(input: &[f64], delay: usize, gain: f64) -> Vec<f64> {
    // y[n] = x[n - d] + g y[n - d]
    let mut y = vec![0.0; input.len()];
    for n in delay..input.len() {
        y[n] = input[n - delay] + gain * y[n - delay];
    }
    y
}

fn allpass(input: &[f64], delay: usize, gain: f64) -> Vec<f64> {
    // y[n] = -g x[n] + x[n - d] + g y[n - d]
    let mut y = vec![0.0; input.len()];
    for n in 0..input.len() {
        let (xd, yd) = if n >= delay {
            (input[n - delay], y[n - delay])
        } else {
            (0.0, 0.0)
        };
        y[n] = -gain * input[n] + xd + gain * yd;
    }
    y
}

/// Comb parameters `(delay in samples, feedback gain)` for a target time.
pub fn comb_parameters(rt60_ms: f64, rate: u32) -> Vec<(usize, f64)> {
    let mut used = Vec::new();
    COMB_DELAYS_MS
        .iter()
        .map(|&ms| {
            let mut d = delay_samples(ms, rt60_ms, rate);
            while used.contains(&d) {
                d += 1;
            }
            used.push(d);
            let seconds = d as f64 / rate as f64;
            (d, 10f64.powf(-3.0 * seconds * 1000.0 / rt60_ms))
        })
        .collect()
}

/// Applies the reverberator. The output is longer than the input by the
/// reverb tail and is not clamped.
pub fn apply_reverb(audio: &Waveform, rt60_ms: f64) -> Result<Vec<f64>, RenderError> {
    let (lo, hi) = REVERB_RT60_RANGE_MS;
    if !(lo..=hi).contains(&rt60_ms) {
        return Err(RenderError::Parameter(format!(
            "rt60 {rt60_ms} ms outside [{lo}, {hi}]"
        )));
    }
    let rate = audio.rate();
    let tail = (TAIL_FACTOR * rt60_ms * rate as f64 / 1000.0).ceil() as usize;
    let mut dry = audio.samples().to_vec();
    dry.resize(audio.len() + tail, 0.0);

    let combs = comb_parameters(rt60_ms, rate);
    let mut wet = vec![0.0; dry.len()];
    for (d, g) in &combs {
        for (w, c) in wet.iter_mut().zip(comb(&dry, *d, *g)) {
            *w += c / combs.len() as f64;
        }
    }
    for ms in ALLPASS_DELAYS_MS {
        wet = allpass(&wet, delay_samples(ms, rt60_ms, rate), ALLPASS_GAIN);
    }
    Ok(dry.iter().zip(&wet).map(|(d, w)| d + WET_GAIN * w).collect())
}
