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

//! On-disk layout, record files and content digests.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::DatasetError;
use crate::scene::{Split, SymbolicScene};
use crate::template::QaInstance;

pub const DATASET_NAME: &str = "CLEAR";
pub const MANIFEST_FILE: &str = "manifest.json";
const FORMAT_VERSION: &str = "1.0";

pub fn scenes_path(root: &Path, split: Split) -> PathBuf {
    root.join("scenes").join(format!("{DATASET_NAME}_{split}_scenes.json"))
}

pub fn questions_path(root: &Path, split: Split) -> PathBuf {
    root.join("questions")
        .join(format!("{DATASET_NAME}_{split}_questions.json"))
}

pub fn audio_path(root: &Path, split: Split, scene_id: u64) -> PathBuf {
    root.join("audio")
        .join(split.as_str())
        .join(format!("{DATASET_NAME}_{split}_{scene_id}.wav"))
}

pub fn spectrogram_path(root: &Path, split: Split, scene_id: u64) -> PathBuf {
    root.join("spectrograms")
        .join(split.as_str())
        .join(format!("{DATASET_NAME}_{split}_{scene_id}.spec"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Info {
    pub dataset: String,
    pub version: String,
    pub split: Split,
    pub master_seed: u64,
}

impl Info {
    fn new(split: Split, master_seed: u64) -> Info {
        Info {
            dataset: DATASET_NAME.into(),
            version: FORMAT_VERSION.into(),
            split,
            master_seed,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ScenesFile {
    info: Info,
    scenes: Vec<SymbolicScene>,
}

#[derive(Serialize, Deserialize)]
struct QuestionsFile {
    info: Info,
    questions: Vec<QaInstance>,
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 of the canonical form: compact JSON with object keys sorted.
pub fn digest_json<T: Serialize>(value: &T) -> String {
    let canonical = serde_json::to_value(value).expect("records serialize");
    digest_bytes(&serde_json::to_vec(&canonical).expect("values serialize"))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<String, DatasetError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(DatasetError::io(dir))?;
    }
    let bytes = serde_json::to_vec(value).expect("records serialize");
    std::fs::write(path, &bytes).map_err(DatasetError::io(path))?;
    Ok(digest_json(value))
}

fn read_json<T: DeserializeOwned>(path: &Path, split: Split) -> Result<T, DatasetError> {
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(DatasetError::MissingSplit {
                split,
                path: path.display().to_string(),
            })
        }
        Err(e) => return Err(DatasetError::io(path)(e)),
    };
    serde_json::from_slice(&bytes).map_err(|e| DatasetError::Format {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Writes the scene file of one split and returns its digest.
pub fn write_scenes(
    root: &Path,
    split: Split,
    master_seed: u64,
    scenes: &[SymbolicScene],
) -> Result<String, DatasetError> {
    let file = ScenesFile {
        info: Info::new(split, master_seed),
        scenes: scenes.to_vec(),
    };
    write_json(&scenes_path(root, split), &file)
}

/// Writes the question file of one split and returns its digest.
pub fn write_questions(
    root: &Path,
    split: Split,
    master_seed: u64,
    questions: &[QaInstance],
) -> Result<String, DatasetError> {
    let file = QuestionsFile {
        info: Info::new(split, master_seed),
        questions: questions.to_vec(),
    };
    write_json(&questions_path(root, split), &file)
}

pub fn read_scenes(root: &Path, split: Split) -> Result<Vec<SymbolicScene>, DatasetError> {
    let file: ScenesFile = read_json(&scenes_path(root, split), split)?;
    Ok(file.scenes)
}

pub fn read_questions(root: &Path, split: Split) -> Result<Vec<QaInstance>, DatasetError> {
    let file: QuestionsFile = read_json(&questions_path(root, split), split)?;
    Ok(file.questions)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub scenes: usize,
    pub questions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub config: serde_json::Value,
    pub bank: String,
    pub canvas_ms: f64,
    /// Keyed by split name.
    pub counts: BTreeMap<String, SplitCounts>,
    /// Relative path to SHA-256 digest.
    pub files: BTreeMap<String, String>,
}

impl DatasetManifest {
    /// Digest over the whole manifest, a one-line fingerprint of a dataset.
    pub fn fingerprint(&self) -> String {
        digest_json(self)
    }
}

pub fn write_manifest(root: &Path, manifest: &DatasetManifest) -> Result<(), DatasetError> {
    let path = root.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    std::fs::write(&path, text + "\n").map_err(DatasetError::io(&path))
}

pub fn read_manifest(root: &Path) -> Result<DatasetManifest, DatasetError> {
    let path = root.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&path).map_err(DatasetError::io(&path))?;
    serde_json::from_str(&text).map_err(|e| DatasetError::Format {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}
