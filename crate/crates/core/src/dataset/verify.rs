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

//! Read-time oracle verification of a written dataset.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Serialize;

use super::io::{read_questions, read_scenes};
use super::DatasetError;
use crate::bank::manifest::{parse_manifest, MANIFEST_FILE};
use crate::dsl::{answer_of, execute_program};
use crate::scene::Split;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub split: Split,
    pub question_id: u64,
    pub scene_id: u64,
    pub stored: String,
    /// `None` when the program could not be evaluated.
    pub recomputed: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub questions: usize,
    pub mismatches: Vec<Mismatch>,
    /// Scene sounds whose source id is absent from the bank manifest.
    pub dangling_sounds: Vec<(u64, String)>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.dangling_sounds.is_empty()
    }
}

/// Re-executes every stored program on its stored scene and compares the
/// result with the stored answer. Sound ids are checked against
/// `bank/manifest.txt` when it exists.
pub fn verify_dataset(root: &Path) -> Result<VerifyReport, DatasetError> {
    let bank_manifest = root.join("bank").join(MANIFEST_FILE);
    let bank_ids: Option<BTreeSet<String>> = match std::fs::read_to_string(&bank_manifest) {
        Ok(text) => Some(
            parse_manifest(&text)
                .map_err(|e| DatasetError::Format {
                    path: bank_manifest.display().to_string(),
                    reason: e.to_string(),
                })?
                .into_iter()
                .map(|r| r.id)
                .collect(),
        ),
        Err(_) => None,
    };
    let mut report = VerifyReport::default();
    for split in Split::ALL {
        let scenes: BTreeMap<u64, _> = read_scenes(root, split)?.into_iter().map(|s| (s.scene_id, s)).collect();
        if let Some(ids) = &bank_ids {
            for s in scenes.values() {
                for p in s.sounds.iter().filter(|p| !ids.contains(&p.source_id)) {
                    report.dangling_sounds.push((s.scene_id, p.source_id.clone()));
                }
            }
        }
        for q in read_questions(root, split)? {
            report.questions += 1;
            let mismatch = |recomputed: Option<String>, reason: String| Mismatch {
                split,
                question_id: q.question_id,
                scene_id: q.scene_id,
                stored: q.answer.surface(),
                recomputed,
                reason,
            };
            let Some(scene) = scenes.get(&q.scene_id) else {
                report
                    .mismatches
                    .push(mismatch(None, "scene not found in this split".into()));
                continue;
            };
            match execute_program(&q.program, scene) {
                Err(e) => report.mismatches.push(mismatch(None, e.to_string())),
                Ok(v) => match answer_of(v, q.family) {
                    Err(e) => report.mismatches.push(mismatch(None, e.to_string())),
                    Ok(a) if a != q.answer => report
                        .mismatches
                        .push(mismatch(Some(a.surface()), "answer differs".into())),
                    Ok(_) => {}
                },
            }
        }
    }
    Ok(report)
}
