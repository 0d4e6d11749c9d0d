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

//! Energy-based silence trimming.

use crate::audio::{ms_to_samples, Waveform};

pub const DEFAULT_WINDOW_MS: f64 = 100.0;
pub const DEFAULT_THRESHOLD_DB: f64 = -50.0;

/// Sample ranges of the analysis windows. Windows do not overlap; a trailing
/// remainder shorter than half a window is merged into the window before it.
pub fn window_bounds(len: usize, window: usize) -> Vec<(usize, usize)> {
    assert!(window > 0);
    if len == 0 {
        return Vec::new();
    }
    let full = len / window;
    let rest = len % window;
    let mut bounds: Vec<(usize, usize)> = (0..full).map(|i| (i * window, (i + 1) * window)).collect();
    if rest > 0 {
        if 2 * rest < window && !bounds.is_empty() {
            bounds.last_mut().unwrap().1 = len;
        } else {
            bounds.push((full * window, len));
        }
    }
    bounds
}

/// `10 log10 sum x^2` over a window; `-inf` for digital silence.
pub fn window_energy_db(samples: &[f64]) -> f64 {
    let sum: f64 = samples.iter().map(|x| x * x).sum();
    10.0 * sum.log10()
}

/// Drops leading and trailing windows whose energy is below `threshold_db`.
///
/// The result is always a contiguous slice of the input starting on a
/// window boundary, so trimming is idempotent.
pub fn trim_silence(audio: &Waveform, window_ms: f64, threshold_db: f64) -> Waveform {
    assert!(window_ms > 0.0, "window_ms must be positive");
    let window = ms_to_samples(window_ms, audio.rate()).max(1);
    let bounds = window_bounds(audio.len(), window);
    let loud = |&(a, b): &(usize, usize)| window_energy_db(&audio.samples()[a..b]) >= threshold_db;
    let first = bounds.iter().position(loud);
    let last = bounds.iter().rposition(loud);
    match (first, last) {
        (Some(f), Some(l)) => audio.slice(bounds[f].0..bounds[l].1),
        _ => audio.slice(0..0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sine(amp: f64, len: usize) -> Vec<f64> {
        (0..len)
            .map(|i| amp * (2.0 * std::f64::consts::PI * 440.0 * i as f64 / 48_000.0).sin())
            .collect()
    }

    #[test]
    fn zeros_become_empty() {
        let w = Waveform::silence(48_000, 48_000);
        assert!(trim_silence(&w, 100.0, -50.0).is_empty());
        assert!(trim_silence(&Waveform::silence(0, 48_000), 100.0, -50.0).is_empty());
    }

    #[test]
    fn loud_sine_unchanged() {
        let w = Waveform::new(sine(1.0, 48_000), 48_000).unwrap();
        assert_eq!(trim_silence(&w, 100.0, -50.0), w);
    }

    #[test]
    fn padding_removed() {
        // Brute-force oracle: per-window energy of a 1e-5 sine over 4800
        // samples is 10 log10(4800 * 0.5e-10) = -66.2 dB; the 0.5 sine gives
        // 10 log10(4800 * 0.125) = +27.8 dB.
        let pad = sine(1e-5, 14_400);
        let pad_energy: f64 = pad[..4800].iter().map(|x| x * x).sum::<f64>();
        assert!((10.0 * pad_energy.log10() - (-66.2)).abs() < 0.1);

        let body = sine(0.5, 48_000);
        let mut all = pad.clone();
        all.extend_from_slice(&body);
        all.extend_from_slice(&pad);
        let w = Waveform::new(all, 48_000).unwrap();
        let t = trim_silence(&w, 100.0, -50.0);
        assert_eq!(t.len(), 48_000);
        assert_eq!(t.samples(), &body[..]);
    }

    #[test]
    fn short_tail_merges() {
        assert_eq!(window_bounds(10_000, 4800), vec![(0, 4800), (4800, 10_000)]);
        assert_eq!(
            window_bounds(12_000, 4800),
            vec![(0, 4800), (4800, 9600), (9600, 12_000)]
        );
        assert_eq!(window_bounds(100, 4800), vec![(0, 100)]);
    }

    proptest! {
        #[test]
        fn idempotent_and_contiguous(
            lead in 0usize..20_000,
            body in 1usize..20_000,
            tail in 0usize..20_000,
            amp in 0.001f64..1.0,
        ) {
            let mut s = vec![0.0; lead];
            s.extend(sine(amp, body));
            s.extend(vec![0.0; tail]);
            let w = Waveform::new(s.clone(), 48_000).unwrap();
            let once = trim_silence(&w, 100.0, -50.0);
            let twice = trim_silence(&once, 100.0, -50.0);
            prop_assert_eq!(&once, &twice);
            if !once.is_empty() {
                let start = s.windows(once.len()).position(|win| win == once.samples());
                prop_assert!(start.is_some());
            }
        }
    }
}
