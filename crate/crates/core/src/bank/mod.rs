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

//! The bank of elementary sounds.

pub mod brightness;
pub mod loudness;
pub mod manifest;
pub mod silence;
pub mod synth;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attributes::{Brightness, Instrument, Loudness, Note};
use crate::audio::{Waveform, SAMPLE_RATE};
use crate::render::wav::{read_wav, WavError};

pub use brightness::{classify_brightness, spectral_centroid, BrightnessThresholds};
pub use loudness::{measure_loudness, IMMEASURABLY_QUIET};
pub use silence::trim_silence;
pub use synth::{synthesize_bank, SynthSpec};

/// Sounds measured inside this closed LUFS range are attenuated.
pub const INTERMEDIATE_RANGE_LUFS: (f64, f64) = (-30.5, -24.0);
/// Gain applied to intermediate-range sounds.
pub const INTERMEDIATE_ATTENUATION_DB: f64 = -10.0;
/// A sound is loud iff its final loudness is strictly above this value.
pub const LOUD_THRESHOLD_LUFS: f64 = -27.0;

#[derive(Debug, thiserror::Error)]
pub enum BankError {
    #[error("no sounds found in {0}")]
    NoSounds(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("ingestion of {file} failed: {reason}")]
    Ingest { file: String, reason: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error("duplicate sound id {0:?}")]
    DuplicateId(String),
}

/// One annotated recording.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementarySound {
    pub id: String,
    pub instrument: Instrument,
    pub note: Note,
    pub loudness_label: Loudness,
    pub brightness_label: Brightness,
    pub measured_lufs: f64,
    pub spectral_centroid: f64,
    pub duration_ms: f64,
    pub audio: Waveform,
}

/// Immutable collection of sounds, ordered by id.
#[derive(Debug, Clone, PartialEq)]
pub struct SoundBank {
    sounds: Vec<ElementarySound>,
    source_descriptor: String,
}

impl SoundBank {
    pub fn new(mut sounds: Vec<ElementarySound>, source_descriptor: impl Into<String>) -> Result<SoundBank, BankError> {
        sounds.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = sounds.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(BankError::DuplicateId(w[0].id.clone()));
        }
        Ok(SoundBank {
            sounds,
            source_descriptor: source_descriptor.into(),
        })
    }

    pub fn sounds(&self) -> &[ElementarySound] {
        &self.sounds
    }

    pub fn len(&self) -> usize {
        self.sounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sounds.is_empty()
    }

    pub fn source_descriptor(&self) -> &str {
        &self.source_descriptor
    }

    pub fn get(&self, id: &str) -> Option<&ElementarySound> {
        self.sounds
            .binary_search_by(|s| s.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.sounds[i])
    }

    /// Per-instrument sound counts.
    pub fn instrument_counts(&self) -> BTreeMap<Instrument, usize> {
        let mut m = BTreeMap::new();
        for s in &self.sounds {
            *m.entry(s.instrument).or_insert(0) += 1;
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestConfig {
    /// Linearly resample files that are not at 48 kHz instead of rejecting them.
    pub resample: bool,
    pub trim_window_ms: f64,
    pub trim_threshold_db: f64,
    pub brightness: BrightnessThresholds,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            resample: false,
            trim_window_ms: silence::DEFAULT_WINDOW_MS,
            trim_threshold_db: silence::DEFAULT_THRESHOLD_DB,
            brightness: BrightnessThresholds::default(),
        }
    }
}

impl IngestConfig {
    pub fn validate(&self) -> Result<(), BankError> {
        if !(self.trim_window_ms > 0.0) {
            return Err(BankError::Config("trim_window_ms must be positive".into()));
        }
        self.brightness.validate().map_err(|e| BankError::Config(e.to_string()))
    }
}

fn provisional_label(lufs: f64) -> Loudness {
    if lufs > LOUD_THRESHOLD_LUFS {
        Loudness::Loud
    } else {
        Loudness::Quiet
    }
}

/// Trims, measures and classifies one recording that is already on the
/// 16-bit grid at the pipeline rate. The loudness label is provisional until
/// [`normalize_intermediate_loudness`] runs.
pub fn annotate(
    id: &str,
    instrument: Instrument,
    note: Note,
    audio: &Waveform,
    config: &IngestConfig,
) -> Result<ElementarySound, String> {
    let trimmed = trim_silence(audio, config.trim_window_ms, config.trim_threshold_db);
    if trimmed.is_empty() {
        return Err("recording is silent after trimming".into());
    }
    let lufs = measure_loudness(&trimmed).map_err(|e| e.to_string())?;
    let (brightness_label, centroid) = classify_brightness(&trimmed, config.brightness).map_err(|e| e.to_string())?;
    Ok(ElementarySound {
        id: id.to_string(),
        instrument,
        note,
        loudness_label: provisional_label(lufs),
        brightness_label,
        measured_lufs: lufs,
        spectral_centroid: centroid,
        duration_ms: trimmed.duration_ms(),
        audio: trimmed,
    })
}

/// Attenuates intermediate-loudness sounds by 10 dB, re-measures them and
/// assigns the final loud/quiet labels.
pub fn normalize_intermediate_loudness(bank: SoundBank) -> SoundBank {
    let gain = 10f64.powf(INTERMEDIATE_ATTENUATION_DB / 20.0);
    let (lo, hi) = INTERMEDIATE_RANGE_LUFS;
    let source = bank.source_descriptor.clone();
    let sounds = bank
        .sounds
        .into_iter()
        .map(|mut s| {
            if (lo..=hi).contains(&s.measured_lufs) {
                s.audio = s.audio.scaled(gain);
                s.measured_lufs = measure_loudness(&s.audio).unwrap_or(IMMEASURABLY_QUIET);
            }
            s.loudness_label = provisional_label(s.measured_lufs);
            s
        })
        .collect();
    SoundBank {
        sounds,
        source_descriptor: source,
    }
}

/// Linear-interpolation resampler, only used when explicitly enabled.
fn resample_linear(samples: &[f64], from: u32, to: u32) -> Vec<f64> {
    if from == to || samples.is_empty() {
        return samples.to_vec();
    }
    let ratio = from as f64 / to as f64;
    let out_len = ((samples.len() as f64) / ratio).floor() as usize;
    (0..out_len)
        .map(|i| {
            let t = i as f64 * ratio;
            let j = t.floor() as usize;
            let frac = t - j as f64;
            let a = samples[j];
            let b = samples.get(j + 1).copied().unwrap_or(a);
            a + (b - a) * frac
        })
        .collect()
}

fn records_for(directory: &Path) -> Result<Vec<manifest::ManifestRecord>, BankError> {
    let manifest_path = directory.join(manifest::MANIFEST_FILE);
    if manifest_path.exists() {
        let text = std::fs::read_to_string(&manifest_path).map_err(|source| BankError::Io {
            path: manifest_path.display().to_string(),
            source,
        })?;
        return manifest::parse_manifest(&text).map_err(|e| BankError::Manifest(e.to_string()));
    }
    let entries = std::fs::read_dir(directory).map_err(|source| BankError::Io {
        path: directory.display().to_string(),
        source,
    })?;
    let mut files: Vec<String> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.to_ascii_lowercase().ends_with(".wav"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|f| {
            manifest::parse_filename(&f).ok_or_else(|| {
                BankError::Manifest(format!(
                    "{f}: no manifest entry and filename does not follow instrument_note.wav"
                ))
            })
        })
        .collect()
}

/// Reads a directory of recordings into an annotated, loudness-normalized bank.
///
/// Metadata comes from `manifest.txt` when present, otherwise from filenames.
pub fn ingest_bank(directory: &Path, config: &IngestConfig) -> Result<SoundBank, BankError> {
    config.validate()?;
    let records = records_for(directory)?;
    if records.is_empty() {
        return Err(BankError::NoSounds(directory.display().to_string()));
    }
    let sounds = records
        .par_iter()
        .map(|r| {
            let path: PathBuf = directory.join(&r.file);
            let ingest_err = |reason: String| BankError::Ingest {
                file: path.display().to_string(),
                reason,
            };
            let decoded = read_wav(&path).map_err(|e| match e {
                WavError::Io { source, .. } => BankError::Io {
                    path: path.display().to_string(),
                    source,
                },
                other => ingest_err(other.to_string()),
            })?;
            if decoded.rate != SAMPLE_RATE && !config.resample {
                return Err(BankError::Config(format!(
                    "{}: sample rate {} Hz, expected {} Hz (enable resampling to convert)",
                    path.display(),
                    decoded.rate,
                    SAMPLE_RATE
                )));
            }
            let samples = resample_linear(&decoded.samples, decoded.rate, SAMPLE_RATE);
            let (wave, _) = Waveform::clamped(samples, SAMPLE_RATE);
            annotate(&r.id, r.instrument, r.note, &wave.quantized_16(), config).map_err(ingest_err)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let bank = SoundBank::new(sounds, directory.display().to_string())?;
    Ok(normalize_intermediate_loudness(bank))
}

/// Writes every sound of the bank as 16-bit WAV plus a manifest.
pub fn write_bank(bank: &SoundBank, directory: &Path) -> Result<(), BankError> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| BankError::Io { path, source }
    };
    std::fs::create_dir_all(directory).map_err(io(directory))?;
    let mut records = Vec::with_capacity(bank.len());
    for s in bank.sounds() {
        let file = format!("{}.wav", s.id);
        let path = directory.join(&file);
        crate::render::wav::write_wav(&s.audio, &path).map_err(|e| BankError::Ingest {
            file: path.display().to_string(),
            reason: e.to_string(),
        })?;
        records.push(manifest::ManifestRecord {
            id: s.id.clone(),
            file,
            instrument: s.instrument,
            note: s.note,
        });
    }
    let mpath = directory.join(manifest::MANIFEST_FILE);
    std::fs::write(&mpath, manifest::format_manifest(&records)).map_err(io(&mpath))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tone_at_lufs(target: f64) -> Waveform {
        let raw: Vec<f64> = (0..48_000)
            .map(|i| 0.1 * (2.0 * PI * 440.0 * i as f64 / 48_000.0).sin())
            .collect();
        let w = Waveform::new(raw, 48_000).unwrap();
        let l = measure_loudness(&w).unwrap();
        w.scaled(10f64.powf((target - l) / 20.0))
    }

    fn sound(id: &str, lufs_target: f64) -> ElementarySound {
        annotate(
            id,
            Instrument::Flute,
            Note::A,
            &tone_at_lufs(lufs_target),
            &IngestConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn normalization_rule() {
        let bank = SoundBank::new(vec![sound("a", -26.0), sound("b", -22.0), sound("c", -32.0)], "test").unwrap();
        let n = normalize_intermediate_loudness(bank);
        let a = n.get("a").unwrap();
        assert!((a.measured_lufs + 36.0).abs() < 0.05, "{}", a.measured_lufs);
        assert_eq!(a.loudness_label, Loudness::Quiet);
        let b = n.get("b").unwrap();
        assert!((b.measured_lufs + 22.0).abs() < 0.05);
        assert_eq!(b.loudness_label, Loudness::Loud);
        let c = n.get("c").unwrap();
        assert!((c.measured_lufs + 32.0).abs() < 0.05);
        assert_eq!(c.loudness_label, Loudness::Quiet);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let e = SoundBank::new(vec![sound("a", -20.0), sound("a", -20.0)], "t").unwrap_err();
        assert!(matches!(e, BankError::DuplicateId(_)));
    }

    #[test]
    fn empty_directory() {
        let dir = tempfile::tempdir().unwrap();
        let e = ingest_bank(dir.path(), &IngestConfig::default()).unwrap_err();
        assert!(e.to_string().contains("no sounds found"));
    }

    #[test]
    fn resampler_length() {
        let x: Vec<f64> = (0..44_100).map(|i| (i as f64 * 0.001).sin()).collect();
        assert_eq!(resample_linear(&x, 44_100, 48_000).len(), 48_000);
    }
}
