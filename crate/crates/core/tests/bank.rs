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

use std::f64::consts::PI;
use std::path::Path;

use aqagen_core::bank::{
    ingest_bank, measure_loudness, synthesize_bank, write_bank, BankError, IngestConfig, SynthSpec,
};
use aqagen_core::{Instrument, Loudness, Note, Waveform, SAMPLE_RATE};
use rand::{Rng, SeedableRng};

const RATE: u32 = SAMPLE_RATE;

fn sine(freq: f64, amplitude: f64, seconds: f64) -> Vec<f64> {
    let n = (seconds * RATE as f64) as usize;
    (0..n)
        .map(|i| amplitude * (2.0 * PI * freq * i as f64 / RATE as f64).sin())
        .collect()
}

fn reference_lufs(samples: &[f64]) -> f64 {
    let mut m = ebur128::EbuR128::new(1, RATE, ebur128::Mode::I).unwrap();
    m.add_frames_f64(samples).unwrap();
    m.loudness_global().unwrap()
}

fn write_16(path: &Path, samples: &[f64]) {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: RATE,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut w = hound::WavWriter::create(path, spec).unwrap();
    for &x in samples {
        w.write_sample((x * 32768.0).round().clamp(-32768.0, 32767.0) as i16)
            .unwrap();
    }
    w.finalize().unwrap();
}

#[test]
fn loudness_agrees_with_reference_meter() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let noise: Vec<f64> = (0..3 * RATE as usize).map(|_| rng.gen_range(-0.2..0.2)).collect();
    let decay: Vec<f64> = sine(220.0, 0.8, 3.0)
        .into_iter()
        .enumerate()
        .map(|(i, x)| x * (-(i as f64) / RATE as f64 * 1.5).exp())
        .collect();
    let burst: Vec<f64> = sine(3000.0, 0.05, 1.0)
        .into_iter()
        .chain(sine(3000.0, 0.6, 1.0))
        .collect();
    let signals = [sine(997.0, 0.5, 3.0), sine(100.0, 0.1, 2.0), noise, decay, burst];
    for (k, s) in signals.iter().enumerate() {
        let ours = measure_loudness(&Waveform::new(s.clone(), RATE).unwrap()).unwrap();
        let reference = reference_lufs(s);
        assert!((ours - reference).abs() < 0.05, "signal {k}: {ours} vs {reference}");
    }
}

#[test]
fn empty_directory_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let e = ingest_bank(dir.path(), &IngestConfig::default()).unwrap_err();
    assert!(matches!(e, BankError::NoSounds(_)));
    assert!(e.to_string().contains("no sounds found"));
}

#[test]
fn wrong_rate_needs_resampling() {
    let dir = tempfile::tempdir().unwrap();
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: 44_100,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut w = hound::WavWriter::create(dir.path().join("flute_A.wav"), spec).unwrap();
    for i in 0..44_100 {
        w.write_sample(((i as f64 * 0.06).sin() * 16000.0) as i16).unwrap();
    }
    w.finalize().unwrap();
    assert!(matches!(
        ingest_bank(dir.path(), &IngestConfig::default()),
        Err(BankError::Config(_))
    ));
    let config = IngestConfig {
        resample: true,
        ..IngestConfig::default()
    };
    let bank = ingest_bank(dir.path(), &config).unwrap();
    assert_eq!(bank.sounds()[0].audio.rate(), RATE);
    assert!((bank.sounds()[0].duration_ms - 1000.0).abs() < 25.0);
}

#[test]
fn twenty_four_bit_input_lands_on_the_16_bit_grid() {
    let dir = tempfile::tempdir().unwrap();
    let codes: Vec<i32> = sine(440.0, 0.5, 1.0)
        .iter()
        .map(|x| (x * 8_388_608.0).round() as i32 + 3)
        .collect();
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: RATE,
        bits_per_sample: 24,
        sample_format: hound::SampleFormat::Int,
    };
    let mut w = hound::WavWriter::create(dir.path().join("violin_A.wav"), spec).unwrap();
    for &c in &codes {
        w.write_sample(c).unwrap();
    }
    w.finalize().unwrap();

    let bank = ingest_bank(dir.path(), &IngestConfig::default()).unwrap();
    let s = &bank.sounds()[0];
    assert_eq!(
        (s.instrument, s.note, s.loudness_label),
        (Instrument::Violin, Note::A, Loudness::Loud)
    );
    let got: Vec<i64> = s
        .audio
        .samples()
        .iter()
        .map(|&x| {
            let code = x * 32768.0;
            assert_eq!(code, code.round(), "off the 16-bit grid");
            code as i64
        })
        .collect();
    // Independent re-quantization: 24-bit code to nearest 16-bit code.
    let expected: Vec<i64> = codes.iter().map(|&c| (c as f64 / 256.0).round() as i64).collect();
    let found = expected.windows(got.len()).any(|w| w == got.as_slice());
    assert!(
        found,
        "ingested samples are not a contiguous re-quantization of the input"
    );
}

#[test]
fn intermediate_loudness_is_attenuated() {
    let dir = tempfile::tempdir().unwrap();
    let base = sine(997.0, 0.5, 2.0);
    let base_lufs = measure_loudness(&Waveform::new(base.clone(), RATE).unwrap()).unwrap();
    let at = |target: f64| {
        let g = 10f64.powf((target - base_lufs) / 20.0);
        base.iter().map(|x| x * g).collect::<Vec<_>>()
    };
    write_16(&dir.path().join("flute_C.wav"), &at(-32.0));
    write_16(&dir.path().join("flute_D.wav"), &at(-26.0));
    write_16(&dir.path().join("flute_E.wav"), &at(-20.0));
    let bank = ingest_bank(dir.path(), &IngestConfig::default()).unwrap();
    let by_note = |n: Note| bank.sounds().iter().find(|s| s.note == n).unwrap();
    let (c, d, e) = (by_note(Note::C), by_note(Note::D), by_note(Note::E));
    assert!((c.measured_lufs + 32.0).abs() < 0.05, "{}", c.measured_lufs);
    assert_eq!(c.loudness_label, Loudness::Quiet);
    assert!((d.measured_lufs + 36.0).abs() < 0.05, "{}", d.measured_lufs);
    assert_eq!(d.loudness_label, Loudness::Quiet);
    assert!((e.measured_lufs + 20.0).abs() < 0.05, "{}", e.measured_lufs);
    assert_eq!(e.loudness_label, Loudness::Loud);
}

/// Magnitude of the DFT of `x` at `freq`, evaluated directly.
fn dft_magnitude(x: &[f64], freq: f64) -> f64 {
    let w = 2.0 * PI * freq / RATE as f64;
    let (re, im) = x.iter().enumerate().fold((0.0, 0.0), |(re, im), (i, &v)| {
        (re + v * (w * i as f64).cos(), im - v * (w * i as f64).sin())
    });
    (re * re + im * im).sqrt()
}

#[test]
fn synthetic_bank_shape() {
    let bank = synthesize_bank(&SynthSpec::standard(), 0).unwrap();
    assert_eq!(bank.len(), 56);
    assert_eq!(bank, synthesize_bank(&SynthSpec::standard(), 0).unwrap());
    assert_ne!(bank, synthesize_bank(&SynthSpec::standard(), 1).unwrap());
    let loud = bank
        .sounds()
        .iter()
        .filter(|s| s.loudness_label == Loudness::Loud)
        .count();
    let share = loud as f64 / bank.len() as f64;
    assert!((0.35..=0.65).contains(&share), "loud share {share}");
    for s in bank.sounds().iter().filter(|s| s.note == Note::A) {
        let x = &s.audio.samples()[..s.audio.len().min(RATE as usize / 2)];
        let on = dft_magnitude(x, 440.0);
        let off = dft_magnitude(x, 440.0 * 1.5);
        assert!(on > 10.0 * off, "{}: {on} vs {off}", s.id);
    }
}

#[test]
fn bank_round_trips_through_disk() {
    let bank = synthesize_bank(&SynthSpec::standard(), 2).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_bank(&bank, dir.path()).unwrap();
    let back = ingest_bank(dir.path(), &IngestConfig::default()).unwrap();
    assert_eq!(back.len(), 56);
    for (a, b) in bank.sounds().iter().zip(back.sounds()) {
        assert_eq!((&a.id, a.instrument, a.note), (&b.id, b.instrument, b.note));
        assert_eq!(a.loudness_label, b.loudness_label, "{}", a.id);
        assert!((a.measured_lufs - b.measured_lufs).abs() < 0.1, "{}", a.id);
    }
}
