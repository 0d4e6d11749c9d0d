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

//! Functional-program question semantics and the ground-truth oracle.

pub mod answer;
pub mod exec;
pub mod node;
pub mod program;

pub use answer::{answer_of, Answer, QuestionFamily};
pub use exec::{execute_program, execute_trace, Attribute, ExecError, SoundSet, Value};
pub use node::{Domain, Literal, NodeKind, ValueType};
pub use program::{parse_program, Program, ProgramError, ProgramNode, RawNode, RawProgram};

/// Small builder for writing programs in code.
#[derive(Debug, Default, Clone)]
pub struct ProgramBuilder {
    nodes: Vec<ProgramNode>,
}

impl ProgramBuilder {
    pub fn new() -> ProgramBuilder {
        ProgramBuilder::default()
    }

    /// Appends a node and returns its index.
    pub fn push(&mut self, kind: NodeKind, inputs: &[usize], literal: Option<Literal>) -> usize {
        self.nodes.push(ProgramNode {
            kind,
            inputs: inputs.to_vec(),
            value_args: literal.into_iter().collect(),
        });
        self.nodes.len() - 1
    }

    pub fn scene(&mut self) -> usize {
        self.push(NodeKind::Scene, &[], None)
    }

    pub fn filter(&mut self, kind: NodeKind, input: usize, literal: Literal) -> usize {
        self.push(kind, &[input], Some(literal))
    }

    pub fn unary(&mut self, kind: NodeKind, input: usize) -> usize {
        self.push(kind, &[input], None)
    }

    pub fn binary(&mut self, kind: NodeKind, a: usize, b: usize) -> usize {
        self.push(kind, &[a, b], None)
    }

    /// Finishes with the last node as output.
    pub fn build(self) -> Result<Program, ProgramError> {
        let out = self.nodes.len().saturating_sub(1);
        Program::new(self.nodes, out)
    }
}
