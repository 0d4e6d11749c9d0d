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

//! Bank manifest: a flat key-value table, one record per line.
//!
//! ```text
//! # comment
//! file=cello_C.wav instrument=cello note=C
//! file=take_07.wav instrument=flute note=F# id=flute_F#_take07
//! ```
//!
//! `file`, `instrument` and `note` are required; `id` defaults to the file
//! stem. Notes accept `C#` or the filename-safe `Cs`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::attributes::{Instrument, Note};

pub const MANIFEST_FILE: &str = "manifest.txt";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRecord {
    pub id: String,
    pub file: String,
    pub instrument: Instrument,
    pub note: Note,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("manifest line {line}: {reason}")]
pub struct ManifestError {
    pub line: usize,
    pub reason: String,
}

fn stem(file: &str) -> &str {
    let name = file.rsplit('/').next().unwrap_or(file);
    name.rsplit_once('.').map_or(name, |(s, _)| s)
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestRecord>, ManifestError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        // `#` also appears in note names, so only whole-line comments exist.
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: String| ManifestError { line: i + 1, reason };
        let mut fields = BTreeMap::new();
        for token in line.split_whitespace() {
            let (k, v) = token
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got {token:?}")))?;
            if fields.insert(k, v).is_some() {
                return Err(err(format!("duplicate key {k:?}")));
            }
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| err(format!("missing field {k:?}")))
        };
        let file = get("file")?.to_string();
        let instrument = get("instrument")?.parse().map_err(|e| err(format!("{e}")))?;
        let note = Note::parse_lenient(get("note")?).map_err(|e| err(format!("{e}")))?;
        if let Some(k) = fields
            .keys()
            .find(|k| !matches!(**k, "file" | "instrument" | "note" | "id"))
        {
            return Err(err(format!("unknown field {k:?}")));
        }
        let id = fields
            .get("id")
            .map_or_else(|| stem(&file).to_string(), |s| s.to_string());
        out.push(ManifestRecord {
            id,
            file,
            instrument,
            note,
        });
    }
    Ok(out)
}

pub fn format_manifest(records: &[ManifestRecord]) -> String {
    let mut s = String::from("# aqagen bank manifest: file instrument note [id]\n");
    for r in records {
        let _ = write!(s, "file={} instrument={} note={}", r.file, r.instrument, r.note);
        if r.id != stem(&r.file) {
            let _ = write!(s, " id={}", r.id);
        }
        s.push('\n');
    }
    s
}

/// Filename convention `{instrument}_{note}[_anything].wav`, e.g. `cello_Cs.wav`.
pub fn parse_filename(file: &str) -> Option<ManifestRecord> {
    let id = stem(file);
    let mut parts = id.split('_');
    let instrument = parts.next()?.to_ascii_lowercase().parse().ok()?;
    let note = Note::parse_lenient(parts.next()?).ok()?;
    Some(ManifestRecord {
        id: id.to_string(),
        file: file.to_string(),
        instrument,
        note,
    })
}
