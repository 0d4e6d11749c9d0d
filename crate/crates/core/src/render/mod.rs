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

//! Scene rendering: concatenation, noise floor, reverberation, fixed canvas.

pub mod noise;
pub mod reverb;
pub mod spectrogram;
pub mod wav;

use crate::audio::{ms_to_samples, Waveform, SAMPLE_RATE};
use crate::bank::SoundBank;
use crate::scene::SymbolicScene;
use crate::seed::{self, Stream};

pub use noise::add_noise;
pub use reverb::apply_reverb;
pub use spectrogram::{compute_spectrogram, Spectrogram, StftParams};
pub use wav::{read_wav, write_wav};

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("scene {scene_id}: {reason}")]
    Scene { scene_id: u64, reason: String },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("feature extraction: {0}")]
    Feature(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Wav(#[from] wav::WavError),
}

/// Rendered audio of one scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneAudio {
    pub scene_id: u64,
    pub audio: Waveform,
    pub canvas_ms: f64,
    /// Samples hard-clamped to full scale.
    pub clipped: usize,
}

/// Seed of the noise realization of a scene.
pub fn noise_seed(scene: &SymbolicScene) -> u64 {
    seed::derive(scene.seed, Stream::Noise, &[])
}

/// Places the sounds dry on a silent canvas, without post-processing.
pub fn dry_mix(scene: &SymbolicScene, bank: &SoundBank, canvas_ms: f64) -> Result<Vec<f64>, RenderError> {
    let canvas = ms_to_samples(canvas_ms, SAMPLE_RATE);
    let fail = |reason: String| RenderError::Scene {
        scene_id: scene.scene_id,
        reason,
    };
    let mut out = vec![0.0; canvas];
    for placed in &scene.sounds {
        let sound = bank
            .get(&placed.source_id)
            .ok_or_else(|| fail(format!("sound {:?} is not in the bank", placed.source_id)))?;
        let start = ms_to_samples(placed.start_ms, SAMPLE_RATE);
        let end = start + sound.audio.len();
        if end > canvas {
            return Err(fail(format!(
                "sounds need {:.1} ms but the canvas is {canvas_ms} ms",
                end as f64 * 1000.0 / SAMPLE_RATE as f64
            )));
        }
        for (o, x) in out[start..end].iter_mut().zip(sound.audio.samples()) {
            *o += x;
        }
    }
    Ok(out)
}

/// Renders a scene onto a canvas of `canvas_ms`: sounds are concatenated at
/// their onsets, noise is added, the result is reverberated, cut to the
/// canvas and clamped.
pub fn render_scene(scene: &SymbolicScene, bank: &SoundBank, canvas_ms: f64) -> Result<SceneAudio, RenderError> {
    let dry = Waveform::clamped(dry_mix(scene, bank, canvas_ms)?, SAMPLE_RATE).0;
    let len = dry.len();
    let noisy = add_noise(&dry, scene.post.noise_attenuation_db, noise_seed(scene))?;
    let mut wet = apply_reverb(&noisy, scene.post.reverb_rt60_ms)?;
    wet.truncate(len);
    let (audio, clipped) = Waveform::clamped(wet, SAMPLE_RATE);
    if clipped > 0 {
        log::warn!("scene {}: clamped {clipped} samples", scene.scene_id);
    }
    Ok(SceneAudio {
        scene_id: scene.scene_id,
        audio,
        canvas_ms,
        clipped,
    })
}

/// Smallest whole-second canvas that holds every scene.
pub fn canvas_for<'a>(scenes: impl IntoIterator<Item = &'a SymbolicScene>) -> f64 {
    let longest = scenes
        .into_iter()
        .map(|s| s.sounds.last().map_or(0.0, |l| l.start_ms + l.duration_ms))
        .fold(0.0, f64::max);
    ((longest / 1000.0).ceil() * 1000.0).max(1000.0)
}
