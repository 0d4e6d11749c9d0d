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

//! Question templates: schema, loading and binding.
//!
//! A template is one JSON file:
//!
//! ```json
//! {
//!   "template_id": "instrument_global_position",
//!   "family": "instrument",
//!   "text_variants": ["What instrument plays a <B> <L> sound in the <G> of the scene?"],
//!   "slots": [{"name": "B", "domain": "brightness", "nullable": true},
//!             {"name": "L", "domain": "loudness", "nullable": true},
//!             {"name": "G", "domain": "global_position"}],
//!   "constraints": [],
//!   "program": {"nodes": [{"kind": "scene"},
//!                         {"kind": "filter_global_position", "inputs": [0], "value_args": ["<G>"]},
//!                         ...]}
//! }
//! ```
//!
//! Placeholders `<NAME>` stand for slots, both in text and in `value_args`.
//! A nullable slot bound to null removes its filter node from the program and
//! its token from the text.

pub mod instantiate;
pub mod text;
pub mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dsl::{Answer, Domain, Literal, NodeKind, Program, ProgramError, ProgramNode, QuestionFamily, RawProgram};

pub use instantiate::{instantiate, instantiate_filtered, instantiate_with, Rejection};
pub use text::realize_text;
pub use validate::{check_degenerate, check_ill_posed, hint_violation};

/// Slot values; `None` is the null binding.
pub type Bindings = BTreeMap<String, Option<Literal>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Slot {
    pub name: String,
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub nullable: bool,
}

/// Binding predicates checked before execution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Constraint {
    /// No two of the slots may carry the same binding (two nulls are equal).
    Distinct { slots: Vec<String> },
    /// At least one of the slots must be bound to a value.
    NotAllNull { slots: Vec<String> },
}

impl Constraint {
    pub fn slots(&self) -> &[String] {
        match self {
            Constraint::Distinct { slots } | Constraint::NotAllNull { slots } => slots,
        }
    }

    pub fn holds(&self, bindings: &Bindings) -> bool {
        let values: Vec<Option<Literal>> = self
            .slots()
            .iter()
            .map(|s| bindings.get(s).copied().flatten())
            .collect();
        match self {
            Constraint::Distinct { .. } => {
                let mut seen = BTreeSet::new();
                values.into_iter().all(|v| seen.insert(v))
            }
            Constraint::NotAllNull { .. } => values.iter().any(Option::is_some),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuestionTemplate {
    pub template_id: String,
    pub family: QuestionFamily,
    pub text_variants: Vec<String>,
    pub slots: Vec<Slot>,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
    pub program: RawProgram,
}

/// A validated question paired with its ground-truth answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaInstance {
    pub question_id: u64,
    pub scene_id: u64,
    pub template_id: String,
    pub family: QuestionFamily,
    pub text: String,
    pub bindings: BTreeMap<String, Option<String>>,
    pub program: Program,
    pub answer: Answer,
}

#[derive(Debug, thiserror::Error)]
pub enum TemplateError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("template {file}: field {field}: {reason}")]
    Schema {
        file: String,
        field: String,
        reason: String,
    },
    #[error("no templates in {0}")]
    NoTemplates(String),
    #[error("slot {0:?} is not bound")]
    Unbound(String),
}

/// Extracts `NAME` from every `<NAME>` token.
pub fn placeholders(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = s;
    while let Some(open) = rest.find('<') {
        let after = &rest[open + 1..];
        match after.find('>') {
            Some(close) => {
                out.push(&after[..close]);
                rest = &after[close + 1..];
            }
            None => break,
        }
    }
    out
}

fn slot_of_arg(arg: &str) -> Option<&str> {
    arg.strip_prefix('<').and_then(|a| a.strip_suffix('>'))
}

impl QuestionTemplate {
    pub fn slot(&self, name: &str) -> Option<&Slot> {
        self.slots.iter().find(|s| s.name == name)
    }

    /// Binds the skeleton. Filters whose slot is null are bypassed.
    pub fn bind(&self, bindings: &Bindings) -> Result<Program, TemplateError> {
        let mut alias: Vec<usize> = Vec::with_capacity(self.program.nodes.len());
        let mut nodes: Vec<ProgramNode> = Vec::new();
        let schema = |field: String, reason: String| TemplateError::Schema {
            file: self.template_id.clone(),
            field,
            reason,
        };
        for (i, raw) in self.program.nodes.iter().enumerate() {
            let kind: NodeKind = serde_json::from_value(serde_json::Value::String(raw.kind.clone())).map_err(|_| {
                schema(
                    format!("program.nodes[{i}].kind"),
                    format!("unknown kind {:?}", raw.kind),
                )
            })?;
            let inputs = raw
                .inputs
                .iter()
                .map(|&j| {
                    alias
                        .get(j)
                        .copied()
                        .ok_or_else(|| schema(format!("program.nodes[{i}].inputs"), format!("bad reference {j}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut value_args = Vec::new();
            let mut bypass = false;
            for arg in &raw.value_args {
                let domain = kind.signature().literal.ok_or_else(|| {
                    schema(
                        format!("program.nodes[{i}].value_args"),
                        format!("{kind} takes no literal"),
                    )
                })?;
                match slot_of_arg(arg) {
                    Some(name) => match bindings.get(name) {
                        None => return Err(TemplateError::Unbound(name.to_string())),
                        Some(None) => bypass = true,
                        Some(Some(lit)) => value_args.push(*lit),
                    },
                    None => value_args.push(
                        domain
                            .parse(arg)
                            .map_err(|e| schema(format!("program.nodes[{i}].value_args"), e.to_string()))?,
                    ),
                }
            }
            if bypass {
                if !kind.is_filter() {
                    return Err(schema(
                        format!("program.nodes[{i}]"),
                        format!("null binding on non-filter node {kind}"),
                    ));
                }
                alias.push(inputs[0]);
            } else {
                nodes.push(ProgramNode {
                    kind,
                    inputs,
                    value_args,
                });
                alias.push(nodes.len() - 1);
            }
        }
        let output = self
            .program
            .output
            .unwrap_or(self.program.nodes.len().saturating_sub(1));
        let output = *alias
            .get(output)
            .ok_or_else(|| schema("program.output".into(), format!("index {output} out of range")))?;
        Program::new(nodes, output).map_err(|e: ProgramError| schema("program".into(), e.to_string()))
    }

    /// Cross-checks slots, placeholders, constraints and the skeleton.
    pub fn validate(&self) -> Result<(), TemplateError> {
        let schema = |field: &str, reason: String| TemplateError::Schema {
            file: self.template_id.clone(),
            field: field.to_string(),
            reason,
        };
        if self.template_id.is_empty() {
            return Err(schema("template_id", "empty".into()));
        }
        if self.text_variants.is_empty() {
            return Err(schema("text_variants", "at least one variant is required".into()));
        }
        let mut names = BTreeSet::new();
        for s in &self.slots {
            if !names.insert(s.name.as_str()) {
                return Err(schema("slots", format!("duplicate slot {:?}", s.name)));
            }
        }
        for (i, v) in self.text_variants.iter().enumerate() {
            let used: BTreeSet<&str> = placeholders(v).into_iter().collect();
            if let Some(p) = used.iter().find(|p| !names.contains(*p)) {
                return Err(schema(
                    &format!("text_variants[{i}]"),
                    format!("undeclared placeholder <{p}>"),
                ));
            }
            if let Some(s) = names.iter().find(|s| !used.contains(*s)) {
                return Err(schema(
                    &format!("text_variants[{i}]"),
                    format!("slot {s} never appears"),
                ));
            }
        }
        for c in &self.constraints {
            if let Some(s) = c.slots().iter().find(|s| !names.contains(s.as_str())) {
                return Err(schema("constraints", format!("unknown slot {s:?}")));
            }
        }
        let mut used_in_program = BTreeSet::new();
        for (i, node) in self.program.nodes.iter().enumerate() {
            for arg in &node.value_args {
                if let Some(name) = slot_of_arg(arg) {
                    let slot = self.slot(name).ok_or_else(|| {
                        schema(
                            &format!("program.nodes[{i}]"),
                            format!("undeclared placeholder <{name}>"),
                        )
                    })?;
                    let kind: Option<NodeKind> =
                        serde_json::from_value(serde_json::Value::String(node.kind.clone())).ok();
                    if let Some(kind) = kind {
                        if kind.signature().literal != Some(slot.domain) {
                            return Err(schema(
                                &format!("program.nodes[{i}]"),
                                format!(
                                    "slot {name} has domain {:?}, {kind} needs {:?}",
                                    slot.domain,
                                    kind.signature().literal
                                ),
                            ));
                        }
                    }
                    used_in_program.insert(name);
                }
            }
        }
        if let Some(s) = names.iter().find(|s| !used_in_program.contains(*s)) {
            return Err(schema("slots", format!("slot {s} is not used by the program")));
        }
        // Bind with first domain values, then with every nullable slot null.
        let first: Bindings = self
            .slots
            .iter()
            .map(|s| (s.name.clone(), Some(s.domain.values()[0])))
            .collect();
        let nulls: Bindings = self
            .slots
            .iter()
            .map(|s| {
                (
                    s.name.clone(),
                    if s.nullable { None } else { Some(s.domain.values()[0]) },
                )
            })
            .collect();
        for b in [first, nulls] {
            let p = self.bind(&b)?;
            if p.output_type() != self.family.output_type() {
                return Err(schema(
                    "program",
                    format!(
                        "output is {:?}, family {} needs {:?}",
                        p.output_type(),
                        self.family,
                        self.family.output_type()
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn from_json(file: &str, text: &str) -> Result<QuestionTemplate, TemplateError> {
        let t: QuestionTemplate = serde_json::from_str(text).map_err(|e| TemplateError::Schema {
            file: file.to_string(),
            field: "<document>".into(),
            reason: e.to_string(),
        })?;
        t.validate().map_err(|e| match e {
            TemplateError::Schema { field, reason, .. } => TemplateError::Schema {
                file: file.to_string(),
                field,
                reason,
            },
            other => other,
        })?;
        Ok(t)
    }
}

/// Validated templates ordered by id.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateSet {
    templates: Vec<QuestionTemplate>,
}

impl TemplateSet {
    pub fn new(mut templates: Vec<QuestionTemplate>) -> Result<TemplateSet, TemplateError> {
        if templates.is_empty() {
            return Err(TemplateError::NoTemplates("<memory>".into()));
        }
        templates.sort_by(|a, b| a.template_id.cmp(&b.template_id));
        if let Some(w) = templates.windows(2).find(|w| w[0].template_id == w[1].template_id) {
            return Err(TemplateError::Schema {
                file: w[0].template_id.clone(),
                field: "template_id".into(),
                reason: "duplicate id".into(),
            });
        }
        let set = TemplateSet { templates };
        for f in set.missing_families() {
            log::warn!("template set has no {f} template");
        }
        Ok(set)
    }

    pub fn templates(&self) -> &[QuestionTemplate] {
        &self.templates
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&QuestionTemplate> {
        self.templates.iter().find(|t| t.template_id == id)
    }

    pub fn missing_families(&self) -> Vec<QuestionFamily> {
        QuestionFamily::ALL
            .into_iter()
            .filter(|f| !self.templates.iter().any(|t| t.family == *f))
            .collect()
    }

    /// The set shipped with the crate.
    pub fn default_set() -> TemplateSet {
        let templates = DEFAULT_TEMPLATES
            .iter()
            .map(|(file, text)| QuestionTemplate::from_json(file, text).expect("shipped templates are valid"))
            .collect();
        TemplateSet::new(templates).expect("shipped template set is valid")
    }
}

/// Loads every `*.json` file of a directory.
pub fn load_templates(directory: &Path) -> Result<TemplateSet, TemplateError> {
    let io = |source| TemplateError::Io {
        path: directory.display().to_string(),
        source,
    };
    let mut files: Vec<_> = std::fs::read_dir(directory)
        .map_err(io)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(TemplateError::NoTemplates(directory.display().to_string()));
    }
    let templates = files
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|source| TemplateError::Io {
                path: p.display().to_string(),
                source,
            })?;
            QuestionTemplate::from_json(&p.display().to_string(), &text)
        })
        .collect::<Result<Vec<_>, _>>()?;
    TemplateSet::new(templates)
}

// `DEFAULT_TEMPLATES: &[(&str, &str)]`, one entry per file in `templates/`.
include!(concat!(env!("OUT_DIR"), "/default_templates.rs"));
