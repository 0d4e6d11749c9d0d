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

//! Additive-synthesis bank so the pipeline runs without recorded data.
//!
//! Each note is a stack of harmonics over the equal-tempered octave-4
//! fundamental. An instrument profile fixes the relative harmonic weights;
//! a per-sound spectral tilt is solved so the sound lands on a sampled
//! target centroid, giving a spread of bright, dark and ambiguous sounds.
//! Half of the sounds (chosen by seeded shuffle) are scaled to a loud
//! target loudness and half to a quiet one before the usual annotation.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{annotate, measure_loudness, normalize_intermediate_loudness, BankError, IngestConfig, SoundBank};
use crate::attributes::{Instrument, Note};
use crate::audio::{ms_to_samples, Waveform, SAMPLE_RATE};
use crate::seed::{self, Stream};

const ATTACK_MS: f64 = 20.0;
const RELEASE_MS: f64 = 80.0;
const PAD_MS: f64 = 150.0;
const MAX_PARTIAL_HZ: f64 = 16_000.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstrumentVoice {
    pub instrument: Instrument,
    pub notes: Vec<Note>,
    /// Weights of harmonics 1, 2, 3, ... before tilt.
    pub harmonics: Vec<f64>,
    /// Range the per-sound target spectral centroid is drawn from, in Hz.
    pub centroid_hz: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub voices: Vec<InstrumentVoice>,
    pub duration_ms: (f64, f64),
    pub loud_lufs: (f64, f64),
    pub quiet_lufs: (f64, f64),
}

fn profile(len: usize, f: impl Fn(usize) -> f64) -> Vec<f64> {
    (1..=len).map(f).collect()
}

impl SynthSpec {
    /// Five instruments; the cello is limited to C..G, the rest cover all
    /// twelve pitch classes, for 56 sounds in total.
    pub fn standard() -> SynthSpec {
        let cello_notes = vec![
            Note::C,
            Note::CSharp,
            Note::D,
            Note::DSharp,
            Note::E,
            Note::F,
            Note::FSharp,
            Note::G,
        ];
        let all = Note::ALL.to_vec();
        SynthSpec {
            voices: vec![
                InstrumentVoice {
                    instrument: Instrument::Cello,
                    notes: cello_notes,
                    harmonics: profile(24, |k| 1.0 / (1.0 + 0.15 * k as f64)),
                    centroid_hz: (700.0, 2600.0),
                },
                InstrumentVoice {
                    instrument: Instrument::Clarinet,
                    notes: all.clone(),
                    harmonics: profile(24, |k| if k % 2 == 1 { 1.0 } else { 0.15 }),
                    centroid_hz: (800.0, 2800.0),
                },
                InstrumentVoice {
                    instrument: Instrument::Flute,
                    notes: all.clone(),
                    harmonics: profile(24, |k| 1.0 / k as f64),
                    centroid_hz: (700.0, 2700.0),
                },
                InstrumentVoice {
                    instrument: Instrument::Trumpet,
                    notes: all.clone(),
                    harmonics: profile(24, |k| 1.0 / (1.0 + 0.05 * k as f64)),
                    centroid_hz: (900.0, 3000.0),
                },
                InstrumentVoice {
                    instrument: Instrument::Violin,
                    notes: all,
                    harmonics: profile(24, |k| 1.0 / (1.0 + 0.1 * k as f64)),
                    centroid_hz: (850.0, 2900.0),
                },
            ],
            duration_ms: (600.0, 1200.0),
            loud_lufs: (-22.0, -14.0),
            quiet_lufs: (-34.0, -25.0),
        }
    }

    pub fn validate(&self) -> Result<(), BankError> {
        let config = |m: &str| Err(BankError::Config(m.to_string()));
        if self.voices.iter().all(|v| v.notes.is_empty()) {
            return config("synthesis spec lists no sounds");
        }
        if self
            .voices
            .iter()
            .any(|v| v.harmonics.is_empty() || v.harmonics.iter().any(|h| *h < 0.0))
        {
            return config("every voice needs non-negative harmonic weights");
        }
        let ordered = |(a, b): (f64, f64)| a <= b;
        if !(ordered(self.duration_ms) && self.duration_ms.0 > 0.0) {
            return config("invalid duration range");
        }
        if !(ordered(self.loud_lufs) && ordered(self.quiet_lufs)) {
            return config("invalid loudness range");
        }
        if self.voices.iter().any(|v| !ordered(v.centroid_hz)) {
            return config("invalid centroid range");
        }
        Ok(())
    }

    fn digest(&self, seed: u64) -> String {
        let json = serde_json::to_vec(self).expect("spec serializes");
        let mut h = Sha256::new();
        h.update(&json);
        h.update(seed.to_le_bytes());
        hex::encode(&h.finalize()[..8])
    }
}

/// Centroid of weighted partials at `f0 * k`, after tilting weights by `k^-tilt`.
fn tilted_centroid(f0: f64, weights: &[f64], tilt: f64) -> f64 {
    let (num, den) = weights.iter().enumerate().fold((0.0, 0.0), |(n, d), (i, w)| {
        let k = (i + 1) as f64;
        let a = w * k.powf(-tilt);
        (n + a * k * f0, d + a)
    });
    num / den
}

/// Solves for the tilt that puts the centroid at `target`. The centroid is
/// monotonically decreasing in the tilt, so bisection suffices.
fn solve_tilt(f0: f64, weights: &[f64], target: f64) -> f64 {
    let (mut lo, mut hi) = (-3.0, 8.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if tilted_centroid(f0, weights, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn render_note<R: Rng>(f0: f64, weights: &[f64], duration_ms: f64, rng: &mut R) -> Vec<f64> {
    let rate = SAMPLE_RATE as f64;
    let n = ms_to_samples(duration_ms, SAMPLE_RATE);
    let attack = ms_to_samples(ATTACK_MS, SAMPLE_RATE) as f64;
    let release = ms_to_samples(RELEASE_MS, SAMPLE_RATE) as f64;
    let phases: Vec<f64> = weights
        .iter()
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    let mut out = vec![0.0; n];
    for (i, (w, phase)) in weights.iter().zip(&phases).enumerate() {
        let freq = f0 * (i + 1) as f64;
        let step = std::f64::consts::TAU * freq / rate;
        for (t, y) in out.iter_mut().enumerate() {
            *y += w * (step * t as f64 + phase).sin();
        }
    }
    for (t, y) in out.iter_mut().enumerate() {
        let t = t as f64;
        let env = (t / attack).min(1.0) * ((n as f64 - t) / release).min(1.0) * (-t / (3.0 * rate)).exp();
        *y *= env;
    }
    let peak = out.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if peak > 0.0 {
        out.iter_mut().for_each(|y| *y *= 0.5 / peak);
    }
    out
}

/// Builds the synthetic bank; identical `(spec, seed)` give identical banks.
pub fn synthesize_bank(spec: &SynthSpec, seed_value: u64) -> Result<SoundBank, BankError> {
    spec.validate()?;
    let config = IngestConfig::default();
    let entries: Vec<(&InstrumentVoice, Note)> = spec
        .voices
        .iter()
        .flat_map(|v| v.notes.iter().map(move |n| (v, *n)))
        .collect();

    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.shuffle(&mut seed::rng(seed::derive(seed_value, Stream::Synth, &[u64::MAX])));
    let mut loud = vec![false; entries.len()];
    for &i in &order[..entries.len() / 2] {
        loud[i] = true;
    }

    let mut sounds = Vec::with_capacity(entries.len());
    for (i, (voice, note)) in entries.iter().enumerate() {
        let mut rng = seed::rng(seed::derive(seed_value, Stream::Synth, &[i as u64]));
        let f0 = note.frequency_hz();
        let partials = ((MAX_PARTIAL_HZ / f0).floor() as usize)
            .min(voice.harmonics.len())
            .max(1);
        let base = &voice.harmonics[..partials];
        let target_centroid = rng.gen_range(voice.centroid_hz.0..=voice.centroid_hz.1);
        let tilt = solve_tilt(f0, base, target_centroid);
        let weights: Vec<f64> = base
            .iter()
            .enumerate()
            .map(|(k, w)| w * ((k + 1) as f64).powf(-tilt))
            .collect();
        let duration = rng.gen_range(spec.duration_ms.0..=spec.duration_ms.1);
        let body = render_note(f0, &weights, duration, &mut rng);

        let range = if loud[i] { spec.loud_lufs } else { spec.quiet_lufs };
        let target_lufs = rng.gen_range(range.0..=range.1);
        let body_wave = Waveform::clamped(body, SAMPLE_RATE).0;
        let current = measure_loudness(&body_wave).map_err(|e| BankError::Config(e.to_string()))?;
        let gain = 10f64.powf((target_lufs - current) / 20.0);

        let pad = vec![0.0; ms_to_samples(PAD_MS, SAMPLE_RATE)];
        let mut samples = pad.clone();
        samples.extend(body_wave.samples().iter().map(|x| x * gain));
        samples.extend(pad);
        let wave = Waveform::clamped(samples, SAMPLE_RATE).0.quantized_16();

        let id = format!("{}_{}", voice.instrument, note.as_str().replace('#', "s"));
        let sound = annotate(&id, voice.instrument, *note, &wave, &config).map_err(|reason| BankError::Ingest {
            file: id.clone(),
            reason,
        })?;
        sounds.push(sound);
    }
    let bank = SoundBank::new(sounds, format!("synthetic:{}", spec.digest(seed_value)))?;
    Ok(normalize_intermediate_loudness(bank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attributes::Brightness;

    #[test]
    fn tilt_solves_target() {
        let w = vec![1.0; 20];
        let t = solve_tilt(440.0, &w, 1800.0);
        assert!((tilted_centroid(440.0, &w, t) - 1800.0).abs() < 1e-6);
    }

    #[test]
    fn empty_spec_is_config_error() {
        let mut spec = SynthSpec::standard();
        spec.voices.clear();
        assert!(matches!(synthesize_bank(&spec, 1), Err(BankError::Config(_))));
    }

    #[test]
    fn standard_counts() {
        let bank = synthesize_bank(&SynthSpec::standard(), 7).unwrap();
        assert_eq!(bank.len(), 56);
        let counts = bank.instrument_counts();
        assert_eq!(counts[&Instrument::Cello], 8);
        assert_eq!(counts[&Instrument::Flute], 12);
        let labels: Vec<_> = bank.sounds().iter().map(|s| s.brightness_label).collect();
        for b in Brightness::ALL {
            assert!(labels.contains(b), "no {b} sound in bank");
        }
    }
}
