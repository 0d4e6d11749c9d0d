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

//! Dataset statistics and the majority-class baseline.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::io::{read_questions, read_scenes};
use super::DatasetError;
use crate::scene::{Split, SymbolicScene};
use crate::template::QaInstance;

type Table = BTreeMap<String, usize>;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SplitStats {
    pub scenes: usize,
    pub questions: usize,
    pub answers: Table,
    /// Answers grouped by their answer category (yes/no, note, ..., position).
    pub answer_categories: Table,
    pub families: Table,
    pub templates: Table,
    /// Keyed by `attribute=value`.
    pub sound_attributes: Table,
    pub majority_answer: Option<String>,
    pub majority_accuracy: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StatsReport {
    pub splits: BTreeMap<Split, SplitStats>,
}

/// Fraction of questions answered by always predicting the most frequent
/// answer. `None` for an empty split.
pub fn majority_baseline(questions: &[QaInstance]) -> Option<f64> {
    majority(questions).map(|(_, acc)| acc)
}

fn majority(questions: &[QaInstance]) -> Option<(String, f64)> {
    let mut counts: Table = BTreeMap::new();
    for q in questions {
        *counts.entry(q.answer.surface()).or_default() += 1;
    }
    // Ties resolve to the alphabetically first answer.
    let (answer, n) = counts.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))?;
    Some((answer.clone(), *n as f64 / questions.len() as f64))
}

fn bump(t: &mut Table, k: impl Into<String>) {
    *t.entry(k.into()).or_default() += 1;
}

impl SplitStats {
    pub fn from_records(scenes: &[SymbolicScene], questions: &[QaInstance]) -> SplitStats {
        let mut s = SplitStats {
            scenes: scenes.len(),
            questions: questions.len(),
            ..Default::default()
        };
        for q in questions {
            bump(&mut s.answers, q.answer.surface());
            bump(&mut s.answer_categories, q.answer.category());
            bump(&mut s.families, q.family.as_str());
            bump(&mut s.templates, q.template_id.as_str());
        }
        for p in scenes.iter().flat_map(|sc| &sc.sounds) {
            bump(&mut s.sound_attributes, format!("instrument={}", p.instrument));
            bump(&mut s.sound_attributes, format!("note={}", p.note));
            bump(&mut s.sound_attributes, format!("loudness={}", p.loudness));
            bump(&mut s.sound_attributes, format!("brightness={}", p.brightness));
            bump(
                &mut s.sound_attributes,
                format!("global_position={}", p.global_position),
            );
        }
        if let Some((a, acc)) = majority(questions) {
            s.majority_answer = Some(a);
            s.majority_accuracy = Some(acc);
        }
        s
    }
}

impl StatsReport {
    /// Splits of the scenes determine where each question is counted.
    pub fn from_records(scenes: &[SymbolicScene], questions: &[QaInstance]) -> StatsReport {
        let split_of: BTreeMap<u64, Split> = scenes.iter().map(|s| (s.scene_id, s.split)).collect();
        let splits = Split::ALL
            .iter()
            .map(|&split| {
                let sc: Vec<SymbolicScene> = scenes.iter().filter(|s| s.split == split).cloned().collect();
                let qs: Vec<QaInstance> = questions
                    .iter()
                    .filter(|q| split_of.get(&q.scene_id) == Some(&split))
                    .cloned()
                    .collect();
                (split, SplitStats::from_records(&sc, &qs))
            })
            .collect();
        StatsReport { splits }
    }

    /// Per-template question counts over all splits.
    pub fn template_usage(&self) -> Table {
        let mut t = Table::new();
        for s in self.splits.values() {
            for (k, v) in &s.templates {
                *t.entry(k.clone()).or_default() += v;
            }
        }
        t
    }

    /// Ratio of the most to the least used template; `None` without questions.
    pub fn template_usage_ratio(&self) -> Option<f64> {
        let t = self.template_usage();
        let max = *t.values().max()?;
        let min = *t.values().min()?;
        Some(max as f64 / min as f64)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (split, s) in &self.splits {
            let _ = writeln!(out, "[{split}] {} scenes, {} questions", s.scenes, s.questions);
            if let (Some(a), Some(acc)) = (&s.majority_answer, s.majority_accuracy) {
                let _ = writeln!(out, "  majority class: {a} ({:.2}%)", acc * 100.0);
            }
            let _ = writeln!(out, "  families:");
            for (k, v) in &s.families {
                let _ = writeln!(
                    out,
                    "    {k:<20} {v:>8} {:>6.2}%",
                    100.0 * *v as f64 / s.questions.max(1) as f64
                );
            }
            let _ = writeln!(out, "  answer categories:");
            for (k, v) in &s.answer_categories {
                let _ = writeln!(out, "    {k:<20} {v:>8}");
            }
        }
        if let Some(r) = self.template_usage_ratio() {
            let _ = writeln!(
                out,
                "templates: {} used, max/min usage ratio {r:.3}",
                self.template_usage().len()
            );
        }
        out
    }
}

/// Reads all three splits of a generated dataset.
pub fn compute_stats(root: &Path) -> Result<StatsReport, DatasetError> {
    let mut scenes = Vec::new();
    let mut questions = Vec::new();
    for split in Split::ALL {
        scenes.extend(read_scenes(root, split)?);
        questions.extend(read_questions(root, split)?);
    }
    Ok(StatsReport::from_records(&scenes, &questions))
}

fn csv(header: &str, rows: impl Iterator<Item = String>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

/// Writes `stats/*.csv` tables and `stats/summary.txt`.
pub fn write_stats(report: &StatsReport, root: &Path) -> Result<(), DatasetError> {
    let dir = root.join("stats");
    std::fs::create_dir_all(&dir).map_err(DatasetError::io(&dir))?;
    let table = |name: &str, header: &str, pick: &dyn Fn(&SplitStats) -> &Table| -> Result<(), DatasetError> {
        let rows = report
            .splits
            .iter()
            .flat_map(|(split, s)| pick(s).iter().map(move |(k, v)| format!("{split},{k},{v}")));
        let path = dir.join(name);
        std::fs::write(&path, csv(header, rows)).map_err(DatasetError::io(&path))
    };
    table("answers.csv", "split,answer,count", &|s| &s.answers)?;
    table("answer_categories.csv", "split,category,count", &|s| {
        &s.answer_categories
    })?;
    table("families.csv", "split,family,count", &|s| &s.families)?;
    table("templates.csv", "split,template_id,count", &|s| &s.templates)?;
    let rows = report.splits.iter().flat_map(|(split, s)| {
        s.sound_attributes.iter().map(move |(k, v)| {
            let (attr, value) = k.split_once('=').unwrap_or((k, ""));
            format!("{split},{attr},{value},{v}")
        })
    });
    let path = dir.join("sound_attributes.csv");
    std::fs::write(&path, csv("split,attribute,value,count", rows)).map_err(DatasetError::io(&path))?;
    let rows = report.splits.iter().map(|(split, s)| {
        format!(
            "{split},{},{},{}",
            s.questions,
            s.majority_answer.as_deref().unwrap_or(""),
            s.majority_accuracy.map_or(String::new(), |a| format!("{a:.6}"))
        )
    });
    let path = dir.join("majority.csv");
    std::fs::write(&path, csv("split,questions,answer,accuracy", rows)).map_err(DatasetError::io(&path))?;
    let path = dir.join("summary.txt");
    std::fs::write(&path, report.summary()).map_err(DatasetError::io(&path))
}
