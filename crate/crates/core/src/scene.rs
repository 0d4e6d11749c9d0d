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

//! Symbolic scenes: ordered selections of elementary sounds with derived
//! position attributes. The question oracle reasons over these.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::attributes::{global_position_of, Brightness, GlobalPosition, Instrument, Loudness, Note, UnknownLiteral};
use crate::bank::{ElementarySound, SoundBank};
use crate::seed::{self, Stream};

/// Number of sounds in a composed scene.
pub const SCENE_SIZE: usize = 10;
pub const NOISE_ATTENUATION_RANGE_DB: (f64, f64) = (-90.0, -80.0);
pub const REVERB_RT60_RANGE_MS: (f64, f64) = (50.0, 400.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = UnknownLiteral;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            _ => Err(UnknownLiteral {
                kind: "split",
                literal: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PostProcessParams {
    /// `20 log10 f` of the noise scale factor `f`.
    pub noise_attenuation_db: f64,
    pub reverb_rt60_ms: f64,
}

impl PostProcessParams {
    pub fn is_valid(&self) -> bool {
        let within = |x: f64, (a, b): (f64, f64)| (a..=b).contains(&x);
        within(self.noise_attenuation_db, NOISE_ATTENUATION_RANGE_DB)
            && within(self.reverb_rt60_ms, REVERB_RT60_RANGE_MS)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedSound {
    pub source_id: String,
    pub instrument: Instrument,
    pub note: Note,
    pub loudness: Loudness,
    pub brightness: Brightness,
    pub duration_ms: f64,
    /// 1-based position in the scene.
    pub absolute_position: u8,
    /// 1-based rank among sounds of the same instrument.
    pub relative_position: u8,
    pub global_position: GlobalPosition,
    pub start_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolicScene {
    pub scene_id: u64,
    pub split: Split,
    pub seed: u64,
    pub post: PostProcessParams,
    pub sounds: Vec<PlacedSound>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SceneError {
    #[error("bank has {0} sounds, a scene needs at least {SCENE_SIZE}")]
    BankTooSmall(usize),
    #[error("scene {scene_id}: {reason}")]
    Invalid { scene_id: u64, reason: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ComposeConfig {
    /// Draw bank entries with replacement instead of ten distinct sounds.
    pub with_replacement: bool,
}

/// Derives absolute, relative and global positions and onsets for an
/// ordered selection. Onsets are cumulative durations with no gap.
pub fn derive_position_attributes(sounds: &[&ElementarySound]) -> Vec<PlacedSound> {
    let n = sounds.len();
    let mut seen: HashMap<Instrument, u8> = HashMap::new();
    let mut start_samples = 0usize;
    sounds
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let rank = seen.entry(s.instrument).or_insert(0);
            *rank += 1;
            let start_ms = start_samples as f64 * 1000.0 / s.audio.rate() as f64;
            start_samples += s.audio.len();
            PlacedSound {
                source_id: s.id.clone(),
                instrument: s.instrument,
                note: s.note,
                loudness: s.loudness_label,
                brightness: s.brightness_label,
                duration_ms: s.duration_ms,
                absolute_position: (i + 1) as u8,
                relative_position: *rank,
                global_position: global_position_of(i + 1, n),
                start_ms,
            }
        })
        .collect()
}

/// Composes scene `scene_id`; the scene seed is derived from the master seed.
///
/// The bank is always indexed in id order, so reordering it does not
/// change the outcome.
pub fn compose_scene(
    bank: &SoundBank,
    scene_id: u64,
    master_seed: u64,
    split: Split,
    config: ComposeConfig,
) -> Result<SymbolicScene, SceneError> {
    let n = bank.len();
    if n < SCENE_SIZE && !(config.with_replacement && n > 0) {
        return Err(SceneError::BankTooSmall(n));
    }
    let scene_seed = seed::derive(master_seed, Stream::Scene, &[scene_id]);
    let mut rng = seed::rng(scene_seed);
    let picks: Vec<usize> = if config.with_replacement {
        (0..SCENE_SIZE).map(|_| rng.gen_range(0..n)).collect()
    } else {
        index::sample(&mut rng, n, SCENE_SIZE).into_vec()
    };
    let selection: Vec<&ElementarySound> = picks.iter().map(|&i| &bank.sounds()[i]).collect();
    let post = PostProcessParams {
        noise_attenuation_db: rng.gen_range(NOISE_ATTENUATION_RANGE_DB.0..=NOISE_ATTENUATION_RANGE_DB.1),
        reverb_rt60_ms: rng.gen_range(REVERB_RT60_RANGE_MS.0..=REVERB_RT60_RANGE_MS.1),
    };
    Ok(SymbolicScene {
        scene_id,
        split,
        seed: scene_seed,
        post,
        sounds: derive_position_attributes(&selection),
    })
}

impl SymbolicScene {
    /// Scene over an arbitrary ordered selection, used for hand-built test
    /// scenes and enumeration. Composed scenes always hold [`SCENE_SIZE`] sounds.
    pub fn from_sounds(scene_id: u64, sounds: &[&ElementarySound]) -> SymbolicScene {
        SymbolicScene {
            scene_id,
            split: Split::Test,
            seed: 0,
            post: PostProcessParams {
                noise_attenuation_db: -85.0,
                reverb_rt60_ms: 100.0,
            },
            sounds: derive_position_attributes(sounds),
        }
    }

    pub fn total_duration_ms(&self) -> f64 {
        self.sounds.iter().map(|s| s.duration_ms).sum()
    }

    /// Checks the position invariants for a scene of any size.
    pub fn check_positions(&self) -> Result<(), SceneError> {
        let fail = |reason: String| {
            Err(SceneError::Invalid {
                scene_id: self.scene_id,
                reason,
            })
        };
        let n = self.sounds.len();
        let mut ranks: HashMap<Instrument, u8> = HashMap::new();
        for (i, s) in self.sounds.iter().enumerate() {
            if s.absolute_position as usize != i + 1 {
                return fail(format!("sound {i} has absolute position {}", s.absolute_position));
            }
            let r = ranks.entry(s.instrument).or_insert(0);
            *r += 1;
            if s.relative_position != *r {
                return fail(format!(
                    "sound {i} has relative position {}, expected {r}",
                    s.relative_position
                ));
            }
            if s.global_position != global_position_of(i + 1, n) {
                return fail(format!("sound {i} has global position {}", s.global_position));
            }
            if i > 0 && s.start_ms <= self.sounds[i - 1].start_ms {
                return fail(format!("onset of sound {i} does not increase"));
            }
        }
        Ok(())
    }

    /// Full check for a dataset scene: ten sounds, valid positions and
    /// post-processing parameters inside their ranges.
    pub fn validate(&self) -> Result<(), SceneError> {
        if self.sounds.len() != SCENE_SIZE {
            return Err(SceneError::Invalid {
                scene_id: self.scene_id,
                reason: format!("{} sounds, expected {SCENE_SIZE}", self.sounds.len()),
            });
        }
        if !self.post.is_valid() {
            return Err(SceneError::Invalid {
                scene_id: self.scene_id,
                reason: format!("post-processing parameters out of range: {:?}", self.post),
            });
        }
        self.check_positions()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audio::Waveform;

    pub(crate) fn fake(id: &str, instrument: Instrument, samples: usize) -> ElementarySound {
        ElementarySound {
            id: id.into(),
            instrument,
            note: Note::C,
            loudness_label: Loudness::Loud,
            brightness_label: Brightness::Dark,
            measured_lufs: -20.0,
            spectral_centroid: 800.0,
            duration_ms: samples as f64 / 48.0,
            audio: Waveform::silence(samples, 48_000),
        }
    }

    #[test]
    fn relative_positions() {
        let a = fake("a", Instrument::Flute, 48);
        let b = fake("b", Instrument::Cello, 48);
        let c = fake("c", Instrument::Flute, 48);
        let placed = derive_position_attributes(&[&a, &b, &c]);
        let rel: Vec<u8> = placed.iter().map(|p| p.relative_position).collect();
        assert_eq!(rel, vec![1, 1, 2]);
    }

    #[test]
    fn onsets_are_cumulative() {
        let sounds: Vec<_> = [500, 700, 300, 400]
            .iter()
            .enumerate()
            .map(|(i, ms)| fake(&i.to_string(), Instrument::Violin, ms * 48))
            .collect();
        let refs: Vec<_> = sounds.iter().collect();
        let placed = derive_position_attributes(&refs);
        let starts: Vec<f64> = placed.iter().map(|p| p.start_ms).collect();
        assert_eq!(starts, vec![0.0, 500.0, 1200.0, 1500.0]);
    }

    fn bank(n: usize) -> SoundBank {
        let sounds = (0..n)
            .map(|i| fake(&format!("s{i:02}"), Instrument::ALL[i % 5], 4800 + i))
            .collect();
        SoundBank::new(sounds, "fake").unwrap()
    }

    #[test]
    fn composition_is_deterministic_and_valid() {
        let b = bank(20);
        let s1 = compose_scene(&b, 3, 11, Split::Train, ComposeConfig::default()).unwrap();
        let s2 = compose_scene(&b, 3, 11, Split::Train, ComposeConfig::default()).unwrap();
        assert_eq!(s1, s2);
        s1.validate().unwrap();
        let mut ids: Vec<_> = s1.sounds.iter().map(|s| s.source_id.clone()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), SCENE_SIZE);
        let s3 = compose_scene(&b, 4, 11, Split::Train, ComposeConfig::default()).unwrap();
        assert_ne!(s1.sounds, s3.sounds);
    }

    #[test]
    fn small_bank_rejected() {
        assert_eq!(
            compose_scene(&bank(9), 0, 0, Split::Train, ComposeConfig::default()),
            Err(SceneError::BankTooSmall(9))
        );
        let with = ComposeConfig { with_replacement: true };
        assert!(compose_scene(&bank(9), 0, 0, Split::Train, with).is_ok());
    }

    #[test]
    fn invariant_under_bank_reordering() {
        let b = bank(20);
        let mut reversed: Vec<_> = b.sounds().to_vec();
        reversed.reverse();
        let b2 = SoundBank::new(reversed, "fake").unwrap();
        assert_eq!(
            compose_scene(&b, 9, 5, Split::Val, ComposeConfig::default()),
            compose_scene(&b2, 9, 5, Split::Val, ComposeConfig::default())
        );
    }

    #[test]
    fn serde_round_trip() {
        let s = compose_scene(&bank(12), 1, 2, Split::Test, ComposeConfig::default()).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<SymbolicScene>(&json).unwrap(), s);
    }
}
