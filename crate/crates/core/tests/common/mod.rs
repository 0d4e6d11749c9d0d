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

//! Helpers shared by the integration tests.

#![allow(dead_code)]

use aqagen_core::{Brightness, ElementarySound, Instrument, Loudness, Note, SymbolicScene, Waveform};

pub fn sound(
    id: &str,
    instrument: Instrument,
    note: Note,
    loudness: Loudness,
    brightness: Brightness,
) -> ElementarySound {
    ElementarySound {
        id: id.into(),
        instrument,
        note,
        loudness_label: loudness,
        brightness_label: brightness,
        measured_lufs: if loudness == Loudness::Loud { -20.0 } else { -33.0 },
        spectral_centroid: match brightness {
            Brightness::Bright => 2500.0,
            Brightness::Dark => 900.0,
            Brightness::None => 1700.0,
        },
        duration_ms: 1.0,
        audio: Waveform::silence(48, 48_000),
    }
}

/// Scene over `(instrument, note, loudness, brightness)` tuples in order.
pub fn scene(spec: &[(Instrument, Note, Loudness, Brightness)]) -> SymbolicScene {
    let sounds: Vec<ElementarySound> = spec
        .iter()
        .enumerate()
        .map(|(i, &(ins, n, l, b))| sound(&format!("s{i}"), ins, n, l, b))
        .collect();
    let refs: Vec<&ElementarySound> = sounds.iter().collect();
    SymbolicScene::from_sounds(0, &refs)
}

/// Scene where only instruments matter.
pub fn instruments(list: &[Instrument]) -> SymbolicScene {
    let spec: Vec<_> = list
        .iter()
        .enumerate()
        .map(|(i, &ins)| (ins, Note::ALL[i % 12], Loudness::Loud, Brightness::Bright))
        .collect();
    scene(&spec)
}

/// Energy decay curve in dB (Schroeder backward integration).
pub fn energy_decay_db(h: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut edc: Vec<f64> = h
        .iter()
        .rev()
        .map(|x| {
            acc += x * x;
            acc
        })
        .collect();
    edc.reverse();
    let total = edc[0];
    edc.iter().map(|e| 10.0 * (e / total).max(1e-300).log10()).collect()
}

/// RT60 from a least-squares fit of the decay curve between -5 and -35 dB.
pub fn rt60_ms(h: &[f64], rate: f64) -> f64 {
    let edc = energy_decay_db(h);
    let start = edc.iter().position(|&d| d <= -5.0).expect("decays 5 dB");
    let end = edc.iter().position(|&d| d <= -35.0).expect("decays 35 dB");
    let pts: Vec<(f64, f64)> = (start..=end).map(|i| (i as f64 / rate, edc[i])).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    -60.0 / slope * 1000.0
}
