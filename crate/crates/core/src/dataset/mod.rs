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

//! End-to-end dataset generation, manifests, statistics and verification.

mod generate;
mod io;
mod split;
mod stats;
mod verify;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::bank::BankError;
use crate::render::RenderError;
use crate::scene::{SceneError, Split};
use crate::template::TemplateError;

pub use generate::{
    build_bank, compose_scenes, generate_dataset, generate_questions, load_template_set, render_audio, with_workers,
    GeneratedDataset,
};
pub use io::{
    audio_path, digest_bytes, digest_json, questions_path, read_manifest, read_questions, read_scenes, scenes_path,
    spectrogram_path, write_manifest, write_questions, write_scenes, DatasetManifest, SplitCounts, DATASET_NAME,
    MANIFEST_FILE,
};
pub use split::{split_counts, split_scenes};
pub use stats::{compute_stats, majority_baseline, write_stats, StatsReport};
pub use verify::{verify_dataset, Mismatch, VerifyReport};

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Bank(#[from] BankError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("scene {scene_id}: {reason}")]
    Question { scene_id: u64, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {reason}")]
    Format { path: String, reason: String },
    #[error("missing split {split}: {path}")]
    MissingSplit { split: Split, path: String },
}

impl DatasetError {
    pub(crate) fn io(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> DatasetError {
        let path = path.display().to_string();
        move |source| DatasetError::Io { path, source }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitRatios {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 0.70,
            val: 0.15,
            test: 0.15,
        }
    }
}

impl SplitRatios {
    pub fn as_array(&self) -> [f64; 3] {
        [self.train, self.val, self.test]
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let r = self.as_array();
        if r.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(DatasetError::Config(format!(
                "split ratios must be positive, got {r:?}"
            )));
        }
        let sum: f64 = r.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(DatasetError::Config(format!("split ratios sum to {sum}, not 1")));
        }
        Ok(())
    }
}

/// Where elementary sounds come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BankSource {
    /// The built-in synthetic instrument bank.
    Synthetic { seed: u64 },
    /// A directory of recordings (see the bank manifest format).
    Directory {
        path: PathBuf,
        #[serde(default)]
        resample: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub n_scenes: usize,
    pub questions_per_scene: (usize, usize),
    pub split_ratios: SplitRatios,
    pub master_seed: u64,
    /// Fixed canvas length; `None` fits the longest scene.
    pub canvas_ms: Option<f64>,
    pub bank: BankSource,
    /// `None` uses the shipped template set.
    pub template_dir: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub with_replacement: bool,
    /// Binding attempts per template and question.
    pub budget: usize,
    pub render_audio: bool,
    pub spectrograms: bool,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig {
            n_scenes: 1000,
            questions_per_scene: (20, 40),
            split_ratios: SplitRatios::default(),
            master_seed: 0,
            canvas_ms: None,
            bank: BankSource::Synthetic { seed: 0 },
            template_dir: None,
            output_dir: PathBuf::from("out"),
            with_replacement: false,
            budget: 200,
            render_audio: true,
            spectrograms: false,
        }
    }
}

impl DatasetConfig {
    pub fn validate(&self) -> Result<(), DatasetError> {
        let bad = |m: String| Err(DatasetError::Config(m));
        if self.n_scenes == 0 {
            return bad("n_scenes must be at least 1".into());
        }
        let (lo, hi) = self.questions_per_scene;
        if lo > hi {
            return bad(format!("questions_per_scene: min {lo} exceeds max {hi}"));
        }
        if self.budget == 0 {
            return bad("budget must be positive".into());
        }
        if let Some(c) = self.canvas_ms {
            if !c.is_finite() || c <= 0.0 {
                return bad(format!("canvas_ms must be positive, got {c}"));
            }
        }
        self.split_ratios.validate()
    }

    /// Serialized configuration without the output location.
    pub fn echo(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(m) = v.as_object_mut() {
            m.remove("output_dir");
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        DatasetConfig::default().validate().unwrap();
    }

    #[test]
    fn ratio_checks() {
        let mut r = SplitRatios::default();
        r.test = 0.2;
        assert!(r.validate().is_err());
        r = SplitRatios {
            train: 1.0,
            val: 0.0,
            test: 0.0,
        };
        assert!(r.validate().is_err());
    }

    #[test]
    fn zero_scenes_or_inverted_range_rejected() {
        let mut c = DatasetConfig {
            n_scenes: 0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        c.n_scenes = 5;
        c.questions_per_scene = (40, 20);
        assert!(c.validate().is_err());
    }

    #[test]
    fn echo_drops_output_dir() {
        let e = DatasetConfig::default().echo();
        assert!(e.get("output_dir").is_none());
        assert_eq!(e["n_scenes"], 1000);
    }
}
