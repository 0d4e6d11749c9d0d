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

//! Answer classes and question families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::exec::{Attribute, Value};
use super::node::ValueType;
use crate::attributes::{ordinal_word, parse_ordinal, Brightness, GlobalPosition, Instrument, Loudness, Note};

/// The nine question families, keyed on the kind of answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuestionFamily {
    YesNo,
    Note,
    Instrument,
    Brightness,
    Loudness,
    Count,
    AbsolutePosition,
    RelativePosition,
    GlobalPosition,
}

impl QuestionFamily {
    pub const ALL: [QuestionFamily; 9] = [
        QuestionFamily::YesNo,
        QuestionFamily::Note,
        QuestionFamily::Instrument,
        QuestionFamily::Brightness,
        QuestionFamily::Loudness,
        QuestionFamily::Count,
        QuestionFamily::AbsolutePosition,
        QuestionFamily::RelativePosition,
        QuestionFamily::GlobalPosition,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QuestionFamily::YesNo => "yes_no",
            QuestionFamily::Note => "note",
            QuestionFamily::Instrument => "instrument",
            QuestionFamily::Brightness => "brightness",
            QuestionFamily::Loudness => "loudness",
            QuestionFamily::Count => "count",
            QuestionFamily::AbsolutePosition => "absolute_position",
            QuestionFamily::RelativePosition => "relative_position",
            QuestionFamily::GlobalPosition => "global_position",
        }
    }

    /// Output type a program of this family must have.
    pub fn output_type(self) -> ValueType {
        match self {
            QuestionFamily::YesNo => ValueType::Boolean,
            QuestionFamily::Count => ValueType::Integer,
            _ => ValueType::Attribute,
        }
    }

    /// Answer classes of the family.
    pub fn answer_classes(self) -> Vec<Answer> {
        match self {
            QuestionFamily::YesNo => vec![Answer::Yes, Answer::No],
            QuestionFamily::Note => Note::ALL.iter().map(|n| Answer::Note(*n)).collect(),
            QuestionFamily::Instrument => Instrument::ALL.iter().map(|i| Answer::Instrument(*i)).collect(),
            QuestionFamily::Brightness => vec![Answer::Bright, Answer::Dark],
            QuestionFamily::Loudness => vec![Answer::Loudness(Loudness::Quiet), Answer::Loudness(Loudness::Loud)],
            QuestionFamily::Count => (0..=10).map(Answer::Count).collect(),
            QuestionFamily::AbsolutePosition | QuestionFamily::RelativePosition => {
                (1..=10).map(Answer::Ordinal).collect()
            }
            QuestionFamily::GlobalPosition => GlobalPosition::ALL.iter().map(|g| Answer::Global(*g)).collect(),
        }
    }
}

impl fmt::Display for QuestionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One of the 47 terminal answer classes. Ordinals are shared between the
/// absolute- and relative-position families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Answer {
    Yes,
    No,
    Note(Note),
    Instrument(Instrument),
    Bright,
    Dark,
    Loudness(Loudness),
    Count(u8),
    Ordinal(u8),
    Global(GlobalPosition),
}

impl Answer {
    /// Every answer class, in a fixed order.
    pub fn all() -> Vec<Answer> {
        let mut out: Vec<Answer> = Vec::new();
        for fam in QuestionFamily::ALL {
            for a in fam.answer_classes() {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out
    }

    pub fn surface(&self) -> String {
        match self {
            Answer::Yes => "yes".into(),
            Answer::No => "no".into(),
            Answer::Note(n) => n.to_string(),
            Answer::Instrument(i) => i.to_string(),
            Answer::Bright => "bright".into(),
            Answer::Dark => "dark".into(),
            Answer::Loudness(l) => l.to_string(),
            Answer::Count(n) => n.to_string(),
            Answer::Ordinal(k) => ordinal_word(*k).unwrap_or("?").into(),
            Answer::Global(g) => g.to_string(),
        }
    }

    /// Coarse category used in answer-distribution tables.
    pub fn category(&self) -> &'static str {
        match self {
            Answer::Yes | Answer::No => "yes_no",
            Answer::Note(_) => "note",
            Answer::Instrument(_) => "instrument",
            Answer::Bright | Answer::Dark => "brightness",
            Answer::Loudness(_) => "loudness",
            Answer::Count(_) => "count",
            Answer::Ordinal(_) => "position",
            Answer::Global(_) => "global_position",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown answer {0:?}")]
pub struct UnknownAnswer(pub String);

impl FromStr for Answer {
    type Err = UnknownAnswer;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "yes" => Answer::Yes,
            "no" => Answer::No,
            "bright" => Answer::Bright,
            "dark" => Answer::Dark,
            _ => {
                if let Ok(n) = s.parse::<Note>() {
                    Answer::Note(n)
                } else if let Ok(i) = s.parse::<Instrument>() {
                    Answer::Instrument(i)
                } else if let Ok(l) = s.parse::<Loudness>() {
                    Answer::Loudness(l)
                } else if let Ok(g) = s.parse::<GlobalPosition>() {
                    Answer::Global(g)
                } else if let Ok(n) = s.parse::<u8>() {
                    if n > 10 {
                        return Err(UnknownAnswer(s.into()));
                    }
                    Answer::Count(n)
                } else if let Ok(k) = parse_ordinal(s) {
                    Answer::Ordinal(k)
                } else {
                    return Err(UnknownAnswer(s.into()));
                }
            }
        })
    }
}

impl Serialize for Answer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.surface())
    }
}

impl<'de> Deserialize<'de> for Answer {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("value {value} does not answer a {family} question")]
pub struct AnswerContractError {
    pub value: String,
    pub family: QuestionFamily,
}

/// Maps an executed value to its answer class for the given family.
pub fn answer_of(value: Value, family: QuestionFamily) -> Result<Answer, AnswerContractError> {
    use QuestionFamily as F;
    let ordinal = |k: u8| (1..=10).contains(&k).then_some(Answer::Ordinal(k));
    let answer = match (family, value) {
        (F::YesNo, Value::Boolean(b)) => Some(if b { Answer::Yes } else { Answer::No }),
        (F::Count, Value::Integer(n)) if n <= 10 => Some(Answer::Count(n)),
        (F::Note, Value::Attribute(Attribute::Note(n))) => Some(Answer::Note(n)),
        (F::Instrument, Value::Attribute(Attribute::Instrument(i))) => Some(Answer::Instrument(i)),
        (F::Brightness, Value::Attribute(Attribute::Brightness(Brightness::Bright))) => Some(Answer::Bright),
        (F::Brightness, Value::Attribute(Attribute::Brightness(Brightness::Dark))) => Some(Answer::Dark),
        (F::Loudness, Value::Attribute(Attribute::Loudness(l))) => Some(Answer::Loudness(l)),
        (F::AbsolutePosition, Value::Attribute(Attribute::AbsolutePosition(k))) => ordinal(k),
        (F::RelativePosition, Value::Attribute(Attribute::RelativePosition(k))) => ordinal(k),
        (F::AbsolutePosition | F::RelativePosition, Value::Integer(k)) => ordinal(k),
        (F::GlobalPosition, Value::Attribute(Attribute::GlobalPosition(g))) => Some(Answer::Global(g)),
        _ => None,
    };
    answer.ok_or_else(|| AnswerContractError {
        value: value.to_string(),
        family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forty_seven_classes() {
        let all = Answer::all();
        assert_eq!(all.len(), 47);
        let mut surfaces: Vec<String> = all.iter().map(|a| a.surface()).collect();
        surfaces.sort();
        surfaces.dedup();
        assert_eq!(surfaces.len(), 47);
        for a in &all {
            assert_eq!(a.surface().parse::<Answer>().unwrap(), *a);
        }
    }

    #[test]
    fn family_sizes() {
        let sizes: Vec<usize> = QuestionFamily::ALL.iter().map(|f| f.answer_classes().len()).collect();
        assert_eq!(sizes, vec![2, 12, 5, 2, 2, 11, 10, 10, 3]);
    }

    #[test]
    fn mapping() {
        assert_eq!(
            answer_of(Value::Boolean(true), QuestionFamily::YesNo).unwrap(),
            Answer::Yes
        );
        assert_eq!(
            answer_of(Value::Integer(5), QuestionFamily::AbsolutePosition)
                .unwrap()
                .surface(),
            "fifth"
        );
        assert_eq!(
            answer_of(
                Value::Attribute(Attribute::Instrument(Instrument::Clarinet)),
                QuestionFamily::Instrument
            )
            .unwrap(),
            Answer::Instrument(Instrument::Clarinet)
        );
        assert!(answer_of(Value::Boolean(true), QuestionFamily::Count).is_err());
        assert!(answer_of(Value::Integer(11), QuestionFamily::Count).is_err());
        assert!(answer_of(
            Value::Attribute(Attribute::Brightness(Brightness::None)),
            QuestionFamily::Brightness
        )
        .is_err());
    }
}
