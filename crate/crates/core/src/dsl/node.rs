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

//! Node catalog: kinds, signatures and literal domains.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::attributes::{
    ordinal_word, parse_ordinal, Brightness, GlobalPosition, Instrument, Loudness, Note, Relation, UnknownLiteral,
};

/// Static type of a node's output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueType {
    SoundSet,
    SoundRef,
    Integer,
    Boolean,
    Attribute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Scene,
    FilterInstrument,
    FilterNote,
    FilterLoudness,
    FilterBrightness,
    FilterGlobalPosition,
    FilterAbsolutePosition,
    FilterRelativePosition,
    Relate,
    Unique,
    Count,
    Exist,
    QueryInstrument,
    QueryNote,
    QueryLoudness,
    QueryBrightness,
    QueryAbsolutePosition,
    QueryRelativePosition,
    QueryGlobalPosition,
    SameInstrument,
    SameNote,
    SameLoudness,
    SameBrightness,
    EqualInteger,
    LessThan,
    GreaterThan,
    EqualAttribute,
    And,
    Or,
}

/// Domain of a literal argument or template slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Instrument,
    Note,
    Loudness,
    /// Only `bright` and `dark`; the ambiguous label is not a valid literal.
    Brightness,
    GlobalPosition,
    Ordinal,
    Relation,
}

/// A literal `value_args` entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    Instrument(Instrument),
    Note(Note),
    Loudness(Loudness),
    Brightness(Brightness),
    GlobalPosition(GlobalPosition),
    Ordinal(u8),
    Relation(Relation),
}

pub struct Signature {
    pub inputs: &'static [ValueType],
    pub output: ValueType,
    pub literal: Option<Domain>,
}

impl NodeKind {
    pub fn signature(self) -> Signature {
        use NodeKind::*;
        use ValueType as T;
        let sig = |inputs, output, literal| Signature {
            inputs,
            output,
            literal,
        };
        match self {
            Scene => sig(&[], T::SoundSet, None),
            FilterInstrument => sig(&[T::SoundSet], T::SoundSet, Some(Domain::Instrument)),
            FilterNote => sig(&[T::SoundSet], T::SoundSet, Some(Domain::Note)),
            FilterLoudness => sig(&[T::SoundSet], T::SoundSet, Some(Domain::Loudness)),
            FilterBrightness => sig(&[T::SoundSet], T::SoundSet, Some(Domain::Brightness)),
            FilterGlobalPosition => sig(&[T::SoundSet], T::SoundSet, Some(Domain::GlobalPosition)),
            FilterAbsolutePosition | FilterRelativePosition => sig(&[T::SoundSet], T::SoundSet, Some(Domain::Ordinal)),
            Relate => sig(&[T::SoundRef], T::SoundSet, Some(Domain::Relation)),
            Unique => sig(&[T::SoundSet], T::SoundRef, None),
            Count => sig(&[T::SoundSet], T::Integer, None),
            Exist => sig(&[T::SoundSet], T::Boolean, None),
            QueryInstrument
            | QueryNote
            | QueryLoudness
            | QueryBrightness
            | QueryAbsolutePosition
            | QueryRelativePosition
            | QueryGlobalPosition => sig(&[T::SoundRef], T::Attribute, None),
            SameInstrument | SameNote | SameLoudness | SameBrightness => sig(&[T::SoundRef], T::SoundSet, None),
            EqualInteger | LessThan | GreaterThan => sig(&[T::Integer, T::Integer], T::Boolean, None),
            EqualAttribute => sig(&[T::Attribute, T::Attribute], T::Boolean, None),
            And | Or => sig(&[T::Boolean, T::Boolean], T::Boolean, None),
        }
    }

    pub fn name(self) -> &'static str {
        use NodeKind::*;
        match self {
            Scene => "scene",
            FilterInstrument => "filter_instrument",
            FilterNote => "filter_note",
            FilterLoudness => "filter_loudness",
            FilterBrightness => "filter_brightness",
            FilterGlobalPosition => "filter_global_position",
            FilterAbsolutePosition => "filter_absolute_position",
            FilterRelativePosition => "filter_relative_position",
            Relate => "relate",
            Unique => "unique",
            Count => "count",
            Exist => "exist",
            QueryInstrument => "query_instrument",
            QueryNote => "query_note",
            QueryLoudness => "query_loudness",
            QueryBrightness => "query_brightness",
            QueryAbsolutePosition => "query_absolute_position",
            QueryRelativePosition => "query_relative_position",
            QueryGlobalPosition => "query_global_position",
            SameInstrument => "same_instrument",
            SameNote => "same_note",
            SameLoudness => "same_loudness",
            SameBrightness => "same_brightness",
            EqualInteger => "equal_integer",
            LessThan => "less_than",
            GreaterThan => "greater_than",
            EqualAttribute => "equal_attribute",
            And => "and",
            Or => "or",
        }
    }

    pub fn is_filter(self) -> bool {
        self.name().starts_with("filter_")
    }

    pub fn is_query(self) -> bool {
        self.name().starts_with("query_")
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Domain {
    pub fn parse(self, s: &str) -> Result<Literal, UnknownLiteral> {
        Ok(match self {
            Domain::Instrument => Literal::Instrument(s.parse()?),
            Domain::Note => Literal::Note(s.parse()?),
            Domain::Loudness => Literal::Loudness(s.parse()?),
            Domain::Brightness => match s.parse()? {
                Brightness::None => {
                    return Err(UnknownLiteral {
                        kind: "brightness",
                        literal: s.to_string(),
                    })
                }
                b => Literal::Brightness(b),
            },
            Domain::GlobalPosition => Literal::GlobalPosition(s.parse()?),
            Domain::Ordinal => Literal::Ordinal(parse_ordinal(s)?),
            Domain::Relation => Literal::Relation(s.parse()?),
        })
    }

    /// Every admissible literal, in a fixed order.
    pub fn values(self) -> Vec<Literal> {
        match self {
            Domain::Instrument => Instrument::ALL.iter().map(|v| Literal::Instrument(*v)).collect(),
            Domain::Note => Note::ALL.iter().map(|v| Literal::Note(*v)).collect(),
            Domain::Loudness => Loudness::ALL.iter().map(|v| Literal::Loudness(*v)).collect(),
            Domain::Brightness => vec![
                Literal::Brightness(Brightness::Bright),
                Literal::Brightness(Brightness::Dark),
            ],
            Domain::GlobalPosition => GlobalPosition::ALL
                .iter()
                .map(|v| Literal::GlobalPosition(*v))
                .collect(),
            Domain::Ordinal => (1..=crate::attributes::MAX_ORDINAL).map(Literal::Ordinal).collect(),
            Domain::Relation => Relation::ALL.iter().map(|v| Literal::Relation(*v)).collect(),
        }
    }
}

impl Literal {
    /// Canonical serialized form; ordinals are spelled out.
    pub fn as_str(&self) -> &'static str {
        match self {
            Literal::Instrument(v) => v.as_str(),
            Literal::Note(v) => v.as_str(),
            Literal::Loudness(v) => v.as_str(),
            Literal::Brightness(v) => v.as_str(),
            Literal::GlobalPosition(v) => v.as_str(),
            Literal::Ordinal(k) => ordinal_word(*k).expect("ordinal literals are validated"),
            Literal::Relation(v) => v.as_str(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
