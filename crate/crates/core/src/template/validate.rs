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

//! Rejection predicates for bound programs.

use crate::dsl::{execute_program, Answer, ExecError, NodeKind, Program};
use crate::scene::SymbolicScene;

/// True iff some `unique` node sees a set that is not a singleton.
pub fn check_ill_posed(program: &Program, scene: &SymbolicScene) -> bool {
    matches!(execute_program(program, scene), Err(ExecError::IllPosed { .. }))
}

/// True iff bypassing some `relate` node (feeding the whole scene in its
/// place) still evaluates, without error, to the same output. The relation
/// then carries no information on this scene.
pub fn check_degenerate(program: &Program, scene: &SymbolicScene) -> bool {
    let Ok(expected) = execute_program(program, scene) else {
        return false;
    };
    program
        .nodes()
        .iter()
        .enumerate()
        .filter(|(_, n)| n.kind == NodeKind::Relate)
        .any(|(i, _)| {
            let reduced = program.with_scene_at(i);
            execute_program(&reduced, scene).is_ok_and(|v| v == expected)
        })
}

/// True iff the program queries a sound whose own description (the filter
/// chain directly above its `unique`) already spells out the answer.
pub fn hint_violation(program: &Program, answer: &Answer) -> bool {
    let nodes = program.nodes();
    let out = &nodes[program.output()];
    if !out.kind.is_query() {
        return false;
    }
    let mut cursor = out.inputs[0];
    if nodes[cursor].kind != NodeKind::Unique {
        return false;
    }
    cursor = nodes[cursor].inputs[0];
    let surface = answer.surface();
    while nodes[cursor].kind.is_filter() {
        if nodes[cursor].value_args.iter().any(|l| l.as_str() == surface) {
            return true;
        }
        cursor = nodes[cursor].inputs[0];
    }
    false
}
