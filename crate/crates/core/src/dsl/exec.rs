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

//! Program evaluation against a symbolic scene.

use std::fmt;

use super::node::{Literal, NodeKind};
use super::program::Program;
use crate::attributes::{Brightness, GlobalPosition, Instrument, Loudness, Note, Relation};
use crate::scene::{PlacedSound, SymbolicScene};

/// Subset of scene positions (0-based indices) as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SoundSet(u64);

impl SoundSet {
    pub fn all(n: usize) -> SoundSet {
        assert!(n <= 64, "scenes are limited to 64 sounds");
        SoundSet(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> SoundSet {
        SoundSet(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.contains(*i))
    }

    pub fn filter(self, mut keep: impl FnMut(usize) -> bool) -> SoundSet {
        SoundSet::from_indices(self.iter().filter(|i| keep(*i)))
    }

    pub fn union(self, other: SoundSet) -> SoundSet {
        SoundSet(self.0 | other.0)
    }

    pub fn intersection(self, other: SoundSet) -> SoundSet {
        SoundSet(self.0 & other.0)
    }
}

/// Attribute value produced by a query node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attribute {
    Instrument(Instrument),
    Note(Note),
    Loudness(Loudness),
    Brightness(Brightness),
    AbsolutePosition(u8),
    RelativePosition(u8),
    GlobalPosition(GlobalPosition),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Value {
    SoundSet(SoundSet),
    /// 0-based index into the scene.
    SoundRef(usize),
    Integer(u8),
    Boolean(bool),
    Attribute(Attribute),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExecError {
    /// `unique` applied to a set that is not a singleton.
    #[error("node {node}: unique over {size} sounds")]
    IllPosed { node: usize, size: usize },
    /// A brightness question touched a sound whose brightness is ambiguous.
    #[error("node {node}: brightness of sound {sound} is ambiguous")]
    Ambiguous { node: usize, sound: usize },
    #[error("node {node}: {reason}")]
    Type { node: usize, reason: String },
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::SoundSet(s) => write!(
                f,
                "{{{}}}",
                s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
            ),
            Value::SoundRef(i) => write!(f, "#{}", i + 1),
            Value::Integer(n) => write!(f, "{n}"),
            Value::Boolean(b) => write!(f, "{b}"),
            Value::Attribute(a) => write!(f, "{a:?}"),
        }
    }
}

fn matches_literal(sound: &PlacedSound, literal: Literal) -> bool {
    match literal {
        Literal::Instrument(v) => sound.instrument == v,
        Literal::Note(v) => sound.note == v,
        Literal::Loudness(v) => sound.loudness == v,
        // `none` is never a literal, so ambiguous sounds never match.
        Literal::Brightness(v) => sound.brightness == v,
        Literal::GlobalPosition(v) => sound.global_position == v,
        Literal::Ordinal(_) | Literal::Relation(_) => unreachable!("not an attribute literal"),
    }
}

struct Evaluator<'a> {
    scene: &'a SymbolicScene,
    values: Vec<Value>,
    node: usize,
}

impl Evaluator<'_> {
    fn input(&self, i: usize) -> Value {
        self.values[i]
    }

    fn type_err(&self, reason: impl Into<String>) -> ExecError {
        ExecError::Type {
            node: self.node,
            reason: reason.into(),
        }
    }

    fn set(&self, i: usize) -> Result<SoundSet, ExecError> {
        match self.input(i) {
            Value::SoundSet(s) => Ok(s),
            v => Err(self.type_err(format!("expected a sound set, got {v}"))),
        }
    }

    fn sound_ref(&self, i: usize) -> Result<usize, ExecError> {
        match self.input(i) {
            Value::SoundRef(r) => Ok(r),
            v => Err(self.type_err(format!("expected a sound, got {v}"))),
        }
    }

    fn integer(&self, i: usize) -> Result<u8, ExecError> {
        match self.input(i) {
            Value::Integer(n) => Ok(n),
            v => Err(self.type_err(format!("expected an integer, got {v}"))),
        }
    }

    fn boolean(&self, i: usize) -> Result<bool, ExecError> {
        match self.input(i) {
            Value::Boolean(b) => Ok(b),
            v => Err(self.type_err(format!("expected a boolean, got {v}"))),
        }
    }

    fn attribute(&self, i: usize) -> Result<Attribute, ExecError> {
        match self.input(i) {
            Value::Attribute(a) => Ok(a),
            v => Err(self.type_err(format!("expected an attribute, got {v}"))),
        }
    }

    fn unambiguous(&self, sound: usize) -> Result<Brightness, ExecError> {
        match self.scene.sounds[sound].brightness {
            Brightness::None => Err(ExecError::Ambiguous { node: self.node, sound }),
            b => Ok(b),
        }
    }

    fn same(&self, input: usize, eq: impl Fn(&PlacedSound, &PlacedSound) -> bool) -> Result<Value, ExecError> {
        let r = self.sound_ref(input)?;
        let sounds = &self.scene.sounds;
        let all = SoundSet::all(sounds.len());
        Ok(Value::SoundSet(all.filter(|i| i != r && eq(&sounds[i], &sounds[r]))))
    }

    fn step(&self, kind: NodeKind, inputs: &[usize], literal: Option<Literal>) -> Result<Value, ExecError> {
        use NodeKind::*;
        let sounds = &self.scene.sounds;
        let first = || inputs[0];
        Ok(match kind {
            Scene => Value::SoundSet(SoundSet::all(sounds.len())),
            FilterInstrument | FilterNote | FilterLoudness | FilterBrightness | FilterGlobalPosition => {
                let l = literal.expect("validated literal");
                Value::SoundSet(self.set(first())?.filter(|i| matches_literal(&sounds[i], l)))
            }
            FilterAbsolutePosition | FilterRelativePosition => {
                let Some(Literal::Ordinal(k)) = literal else {
                    return Err(self.type_err("expected an ordinal literal"));
                };
                let relative = kind == FilterRelativePosition;
                Value::SoundSet(self.set(first())?.filter(|i| {
                    let s = &sounds[i];
                    (if relative {
                        s.relative_position
                    } else {
                        s.absolute_position
                    }) == k
                }))
            }
            Relate => {
                let r = self.sound_ref(first())?;
                let all = SoundSet::all(sounds.len());
                Value::SoundSet(match literal {
                    Some(Literal::Relation(Relation::Before)) => all.filter(|i| i < r),
                    Some(Literal::Relation(Relation::After)) => all.filter(|i| i > r),
                    _ => return Err(self.type_err("expected a relation literal")),
                })
            }
            Unique => {
                let s = self.set(first())?;
                if s.len() != 1 {
                    return Err(ExecError::IllPosed {
                        node: self.node,
                        size: s.len(),
                    });
                }
                Value::SoundRef(s.iter().next().unwrap())
            }
            Count => Value::Integer(self.set(first())?.len() as u8),
            Exist => Value::Boolean(!self.set(first())?.is_empty()),
            QueryInstrument
            | QueryNote
            | QueryLoudness
            | QueryBrightness
            | QueryAbsolutePosition
            | QueryRelativePosition
            | QueryGlobalPosition => {
                let r = self.sound_ref(first())?;
                let s = &sounds[r];
                Value::Attribute(match kind {
                    QueryInstrument => Attribute::Instrument(s.instrument),
                    QueryNote => Attribute::Note(s.note),
                    QueryLoudness => Attribute::Loudness(s.loudness),
                    QueryBrightness => Attribute::Brightness(self.unambiguous(r)?),
                    QueryAbsolutePosition => Attribute::AbsolutePosition(s.absolute_position),
                    QueryRelativePosition => Attribute::RelativePosition(s.relative_position),
                    _ => Attribute::GlobalPosition(s.global_position),
                })
            }
            SameInstrument => self.same(first(), |a, b| a.instrument == b.instrument)?,
            SameNote => self.same(first(), |a, b| a.note == b.note)?,
            SameLoudness => self.same(first(), |a, b| a.loudness == b.loudness)?,
            SameBrightness => {
                self.unambiguous(self.sound_ref(first())?)?;
                self.same(first(), |a, b| a.brightness == b.brightness)?
            }
            EqualInteger => Value::Boolean(self.integer(inputs[0])? == self.integer(inputs[1])?),
            LessThan => Value::Boolean(self.integer(inputs[0])? < self.integer(inputs[1])?),
            GreaterThan => Value::Boolean(self.integer(inputs[0])? > self.integer(inputs[1])?),
            EqualAttribute => {
                let (a, b) = (self.attribute(inputs[0])?, self.attribute(inputs[1])?);
                if std::mem::discriminant(&a) != std::mem::discriminant(&b) {
                    return Err(self.type_err(format!("cannot compare {a:?} with {b:?}")));
                }
                Value::Boolean(a == b)
            }
            And => Value::Boolean(self.boolean(inputs[0])? && self.boolean(inputs[1])?),
            Or => Value::Boolean(self.boolean(inputs[0])? || self.boolean(inputs[1])?),
        })
    }
}

/// Evaluates every node in order and returns the value of each.
pub fn execute_trace(program: &Program, scene: &SymbolicScene) -> Result<Vec<Value>, ExecError> {
    let mut ev = Evaluator {
        scene,
        values: Vec::with_capacity(program.nodes().len()),
        node: 0,
    };
    for (i, node) in program.nodes().iter().enumerate() {
        ev.node = i;
        let v = ev.step(node.kind, &node.inputs, node.value_args.first().copied())?;
        ev.values.push(v);
    }
    Ok(ev.values)
}

/// Evaluates the program and returns the output node's value.
pub fn execute_program(program: &Program, scene: &SymbolicScene) -> Result<Value, ExecError> {
    execute_trace(program, scene).map(|values| values[program.output()])
}
