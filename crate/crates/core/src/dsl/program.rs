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

//! Programs as topologically ordered node lists.
//!
//! Serialized form (JSON):
//!
//! ```json
//! {"nodes": [{"kind": "scene", "inputs": [], "value_args": []},
//!            {"kind": "filter_instrument", "inputs": [0], "value_args": ["flute"]},
//!            {"kind": "count", "inputs": [1], "value_args": []}],
//!  "output": 2}
//! ```

use serde::{Deserialize, Serialize};

use super::node::{Literal, NodeKind, ValueType};

/// Node as it appears on disk; literals are still strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RawNode {
    pub kind: String,
    #[serde(default)]
    pub inputs: Vec<usize>,
    #[serde(default)]
    pub value_args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RawProgram {
    pub nodes: Vec<RawNode>,
    /// Defaults to the last node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProgramNode {
    pub kind: NodeKind,
    pub inputs: Vec<usize>,
    pub value_args: Vec<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    nodes: Vec<ProgramNode>,
    output: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProgramError {
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("program has no nodes")]
    Empty,
    #[error("node {node}: unknown kind {kind:?}")]
    UnknownKind { node: usize, kind: String },
    #[error("node {node}: {kind} takes {expected} inputs, got {got}")]
    Arity {
        node: usize,
        kind: NodeKind,
        expected: usize,
        got: usize,
    },
    #[error("node {node}: {kind} takes {expected} literal arguments, got {got}")]
    LiteralArity {
        node: usize,
        kind: NodeKind,
        expected: usize,
        got: usize,
    },
    #[error("node {node}: {reason}")]
    UnknownLiteral { node: usize, reason: String },
    #[error("node {node}: references itself")]
    Cycle { node: usize },
    #[error("node {node}: references later node {input}")]
    ForwardReference { node: usize, input: usize },
    #[error("node {node}: input {position} must be {expected:?}, node {input} produces {got:?}")]
    Type {
        node: usize,
        position: usize,
        input: usize,
        expected: ValueType,
        got: ValueType,
    },
    #[error("output index {0} is out of range")]
    Output(usize),
    #[error("node {node}: unreachable from the output")]
    DeadNode { node: usize },
}

impl ProgramError {
    /// Index of the offending node, when the error is about one node.
    pub fn node(&self) -> Option<usize> {
        use ProgramError::*;
        match self {
            UnknownKind { node, .. }
            | Arity { node, .. }
            | LiteralArity { node, .. }
            | UnknownLiteral { node, .. }
            | Cycle { node }
            | ForwardReference { node, .. }
            | Type { node, .. }
            | DeadNode { node } => Some(*node),
            Malformed(_) | Empty | Output(_) => None,
        }
    }
}

fn kind_from_str(s: &str) -> Option<NodeKind> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).ok()
}

impl Program {
    /// Validates node structure, literal values, ordering and static types.
    /// Dead nodes are rejected unless `allow_dead` is set.
    fn build(nodes: Vec<ProgramNode>, output: usize, allow_dead: bool) -> Result<Program, ProgramError> {
        if nodes.is_empty() {
            return Err(ProgramError::Empty);
        }
        if output >= nodes.len() {
            return Err(ProgramError::Output(output));
        }
        for (i, node) in nodes.iter().enumerate() {
            let sig = node.kind.signature();
            if node.inputs.len() != sig.inputs.len() {
                return Err(ProgramError::Arity {
                    node: i,
                    kind: node.kind,
                    expected: sig.inputs.len(),
                    got: node.inputs.len(),
                });
            }
            let want_literals = usize::from(sig.literal.is_some());
            if node.value_args.len() != want_literals {
                return Err(ProgramError::LiteralArity {
                    node: i,
                    kind: node.kind,
                    expected: want_literals,
                    got: node.value_args.len(),
                });
            }
            for (position, (&input, &expected)) in node.inputs.iter().zip(sig.inputs).enumerate() {
                if input == i {
                    return Err(ProgramError::Cycle { node: i });
                }
                if input > i {
                    return Err(ProgramError::ForwardReference { node: i, input });
                }
                let got = nodes[input].kind.signature().output;
                if got != expected {
                    return Err(ProgramError::Type {
                        node: i,
                        position,
                        input,
                        expected,
                        got,
                    });
                }
            }
        }
        let program = Program { nodes, output };
        if !allow_dead {
            let live = program.live_nodes();
            if let Some(node) = live.iter().position(|l| !l) {
                return Err(ProgramError::DeadNode { node });
            }
        }
        Ok(program)
    }

    pub fn new(nodes: Vec<ProgramNode>, output: usize) -> Result<Program, ProgramError> {
        Program::build(nodes, output, false)
    }

    /// Converts a raw program whose literals are fully bound.
    pub fn from_raw(raw: &RawProgram) -> Result<Program, ProgramError> {
        let mut nodes = Vec::with_capacity(raw.nodes.len());
        for (i, r) in raw.nodes.iter().enumerate() {
            let kind = kind_from_str(&r.kind).ok_or_else(|| ProgramError::UnknownKind {
                node: i,
                kind: r.kind.clone(),
            })?;
            let domain = kind.signature().literal;
            let value_args = match domain {
                Some(d) => r
                    .value_args
                    .iter()
                    .map(|v| {
                        d.parse(v).map_err(|e| ProgramError::UnknownLiteral {
                            node: i,
                            reason: e.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None if r.value_args.is_empty() => Vec::new(),
                None => {
                    return Err(ProgramError::LiteralArity {
                        node: i,
                        kind,
                        expected: 0,
                        got: r.value_args.len(),
                    })
                }
            };
            nodes.push(ProgramNode {
                kind,
                inputs: r.inputs.clone(),
                value_args,
            });
        }
        let output = raw.output.unwrap_or(nodes.len().saturating_sub(1));
        Program::new(nodes, output)
    }

    pub fn to_raw(&self) -> RawProgram {
        RawProgram {
            nodes: self
                .nodes
                .iter()
                .map(|n| RawNode {
                    kind: n.kind.name().to_string(),
                    inputs: n.inputs.clone(),
                    value_args: n.value_args.iter().map(|l| l.as_str().to_string()).collect(),
                })
                .collect(),
            output: Some(self.output),
        }
    }

    pub fn nodes(&self) -> &[ProgramNode] {
        &self.nodes
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn output_type(&self) -> ValueType {
        self.nodes[self.output].kind.signature().output
    }

    pub fn output_kind(&self) -> NodeKind {
        self.nodes[self.output].kind
    }

    /// Marks nodes the output depends on.
    pub fn live_nodes(&self) -> Vec<bool> {
        let mut live = vec![false; self.nodes.len()];
        live[self.output] = true;
        for i in (0..self.nodes.len()).rev() {
            if live[i] {
                for &j in &self.nodes[i].inputs {
                    live[j] = true;
                }
            }
        }
        live
    }

    /// Copy with node `target` replaced by a `scene` node and unreachable
    /// nodes dropped. `target` must produce a sound set.
    pub fn with_scene_at(&self, target: usize) -> Program {
        assert_eq!(self.nodes[target].kind.signature().output, ValueType::SoundSet);
        let mut nodes = self.nodes.clone();
        nodes[target] = ProgramNode {
            kind: NodeKind::Scene,
            inputs: Vec::new(),
            value_args: Vec::new(),
        };
        Program::build(nodes, self.output, true)
            .expect("substituting a scene node keeps the program well-typed")
            .compacted()
    }

    /// Removes dead nodes and renumbers the rest.
    pub fn compacted(&self) -> Program {
        let live = self.live_nodes();
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if live[i] {
                remap[i] = nodes.len();
                nodes.push(ProgramNode {
                    kind: n.kind,
                    inputs: n.inputs.iter().map(|&j| remap[j]).collect(),
                    value_args: n.value_args.clone(),
                });
            }
        }
        Program {
            output: remap[self.output],
            nodes,
        }
    }

    /// Compact canonical JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("programs serialize")
    }
}

/// Parses and validates a serialized program.
pub fn parse_program(serialized: &str) -> Result<Program, ProgramError> {
    let raw: RawProgram = serde_json::from_str(serialized).map_err(|e| ProgramError::Malformed(e.to_string()))?;
    Program::from_raw(&raw)
}

impl Serialize for Program {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Program {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawProgram::deserialize(d)?;
        Program::from_raw(&raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_chain() {
        let p = parse_program(
            r#"{"nodes":[{"kind":"scene"},{"kind":"filter_instrument","inputs":[0],"value_args":["flute"]},{"kind":"count","inputs":[1]}]}"#,
        )
        .unwrap();
        assert_eq!(p.nodes().len(), 3);
        assert_eq!(p.output(), 2);
        assert_eq!(parse_program(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn self_reference_is_cycle() {
        let e = parse_program(r#"{"nodes":[{"kind":"scene"},{"kind":"count","inputs":[1]}]}"#).unwrap_err();
        assert_eq!(e, ProgramError::Cycle { node: 1 });
        assert_eq!(e.node(), Some(1));
    }

    #[test]
    fn forward_reference() {
        let e = parse_program(r#"{"nodes":[{"kind":"count","inputs":[1]},{"kind":"scene"}],"output":0}"#).unwrap_err();
        assert_eq!(e, ProgramError::ForwardReference { node: 0, input: 1 });
    }

    #[test]
    fn unknown_literal() {
        let e = parse_program(
            r#"{"nodes":[{"kind":"scene"},{"kind":"filter_note","inputs":[0],"value_args":["H"]},{"kind":"count","inputs":[1]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(e, ProgramError::UnknownLiteral { node: 1, .. }), "{e}");
    }

    #[test]
    fn unknown_kind_and_arity() {
        let e = parse_program(r#"{"nodes":[{"kind":"teleport"}]}"#).unwrap_err();
        assert!(matches!(e, ProgramError::UnknownKind { node: 0, .. }));
        let e = parse_program(r#"{"nodes":[{"kind":"scene"},{"kind":"count","inputs":[0,0]}]}"#).unwrap_err();
        assert!(matches!(e, ProgramError::Arity { node: 1, .. }));
        let e = parse_program(r#"{"nodes":[{"kind":"scene"},{"kind":"filter_note","inputs":[0]}]}"#).unwrap_err();
        assert!(matches!(e, ProgramError::LiteralArity { node: 1, .. }));
    }

    #[test]
    fn type_mismatch() {
        let e = parse_program(r#"{"nodes":[{"kind":"scene"},{"kind":"query_note","inputs":[0]}]}"#).unwrap_err();
        assert!(matches!(e, ProgramError::Type { node: 1, .. }));
    }

    #[test]
    fn dead_nodes_rejected() {
        let e = parse_program(r#"{"nodes":[{"kind":"scene"},{"kind":"scene"},{"kind":"count","inputs":[1]}]}"#)
            .unwrap_err();
        assert_eq!(e, ProgramError::DeadNode { node: 0 });
    }

    #[test]
    fn brightness_none_not_a_literal() {
        let e = parse_program(
            r#"{"nodes":[{"kind":"scene"},{"kind":"filter_brightness","inputs":[0],"value_args":["none"]},{"kind":"count","inputs":[1]}]}"#,
        );
        assert!(e.is_err());
    }
}
