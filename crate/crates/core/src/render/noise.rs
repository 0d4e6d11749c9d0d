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

//! White noise floor.

use rand::Rng;

use super::RenderError;
use crate::audio::Waveform;
use crate::scene::NOISE_ATTENUATION_RANGE_DB;
use crate::seed;

/// Linear scale factor `f` with `20 log10 f = attenuation_db`.
pub fn attenuation_factor(attenuation_db: f64) -> f64 {
    10f64.powf(attenuation_db / 20.0)
}

fn check(attenuation_db: f64) -> Result<(), RenderError> {
    let (lo, hi) = NOISE_ATTENUATION_RANGE_DB;
    if (lo..=hi).contains(&attenuation_db) {
        Ok(())
    } else {
        Err(RenderError::Parameter(format!(
            "noise attenuation {attenuation_db} dB outside [{lo}, {hi}]"
        )))
    }
}

/// Uniform full-scale noise drawn from [-1, 1], scaled by the attenuation factor.
pub fn noise_realization(len: usize, attenuation_db: f64, seed_value: u64) -> Result<Vec<f64>, RenderError> {
    check(attenuation_db)?;
    let f = attenuation_factor(attenuation_db);
    let mut rng = seed::rng(seed_value);
    Ok((0..len).map(|_| f * rng.gen_range(-1.0..=1.0)).collect())
}

/// Adds the seeded noise realization to `audio`, clamping to full scale.
pub fn add_noise(audio: &Waveform, attenuation_db: f64, seed_value: u64) -> Result<Waveform, RenderError> {
    let noise = noise_realization(audio.len(), attenuation_db, seed_value)?;
    let mixed = audio.samples().iter().zip(&noise).map(|(x, n)| x + n).collect();
    Ok(Waveform::clamped(mixed, audio.rate()).0)
}
