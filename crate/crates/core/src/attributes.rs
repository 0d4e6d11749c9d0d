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

//! Categorical sound attributes and their surface forms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Error returned when a literal does not name a known attribute value.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} literal {literal:?}")]
pub struct UnknownLiteral {
    pub kind: &'static str,
    pub literal: String,
}

impl UnknownLiteral {
    fn new(kind: &'static str, literal: &str) -> Self {
        UnknownLiteral {
            kind,
            literal: literal.to_string(),
        }
    }
}

macro_rules! string_enum {
    (
        $(#[$meta:meta])*
        $name:ident, $kind:literal { $($variant:ident => $text:literal),+ $(,)? }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $(
                #[serde(rename = $text)]
                $variant,
            )+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text,)+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = UnknownLiteral;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(UnknownLiteral::new($kind, s)),
                }
            }
        }
    };
}

string_enum! {
    /// Instrument family of an elementary sound.
    Instrument, "instrument" {
        Cello => "cello",
        Clarinet => "clarinet",
        Flute => "flute",
        Trumpet => "trumpet",
        Violin => "violin",
    }
}

string_enum! {
    /// Pitch class on the fourth octave of the chromatic scale.
    Note, "note" {
        A => "A",
        ASharp => "A#",
        B => "B",
        C => "C",
        CSharp => "C#",
        D => "D",
        DSharp => "D#",
        E => "E",
        F => "F",
        FSharp => "F#",
        G => "G",
        GSharp => "G#",
    }
}

string_enum! {
    Loudness, "loudness" {
        Quiet => "quiet",
        Loud => "loud",
    }
}

string_enum! {
    /// Brightness label. `None` marks sounds whose spectral centroid falls in
    /// the ambiguity band; they never satisfy a brightness filter.
    Brightness, "brightness" {
        Bright => "bright",
        Dark => "dark",
        None => "none",
    }
}

string_enum! {
    GlobalPosition, "global position" {
        Beginning => "beginning",
        Middle => "middle",
        End => "end",
    }
}

string_enum! {
    /// Temporal relation between two sounds of a scene.
    Relation, "relation" {
        Before => "before",
        After => "after",
    }
}

impl Note {
    /// Semitone offset from C within the octave.
    pub fn semitone_from_c(self) -> i32 {
        match self {
            Note::C => 0,
            Note::CSharp => 1,
            Note::D => 2,
            Note::DSharp => 3,
            Note::E => 4,
            Note::F => 5,
            Note::FSharp => 6,
            Note::G => 7,
            Note::GSharp => 8,
            Note::A => 9,
            Note::ASharp => 10,
            Note::B => 11,
        }
    }

    /// Equal-tempered frequency of the note in octave 4 (A4 = 440 Hz).
    pub fn frequency_hz(self) -> f64 {
        let semitones_from_a4 = self.semitone_from_c() - 9;
        440.0 * 2f64.powf(semitones_from_a4 as f64 / 12.0)
    }

    /// Parses either the canonical spelling (`C#`) or the filename-safe one (`Cs`).
    pub fn parse_lenient(s: &str) -> Result<Note, UnknownLiteral> {
        let canonical = match s.strip_suffix('s') {
            Some(base) if !base.is_empty() => format!("{base}#"),
            _ => s.to_string(),
        };
        canonical.parse().map_err(|_| UnknownLiteral::new("note", s))
    }
}

const ORDINALS: [&str; 10] = [
    "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth", "tenth",
];

/// Largest ordinal with a spelled-out form.
pub const MAX_ORDINAL: u8 = 10;

/// Spelled-out ordinal for positions 1..=10.
pub fn ordinal_word(position: u8) -> Option<&'static str> {
    if (1..=MAX_ORDINAL).contains(&position) {
        Some(ORDINALS[position as usize - 1])
    } else {
        None
    }
}

/// Parses `"third"` or `"3"` into 3.
pub fn parse_ordinal(s: &str) -> Result<u8, UnknownLiteral> {
    if let Some(i) = ORDINALS.iter().position(|w| *w == s) {
        return Ok(i as u8 + 1);
    }
    match s.parse::<u8>() {
        Ok(n) if (1..=MAX_ORDINAL).contains(&n) => Ok(n),
        _ => Err(UnknownLiteral::new("ordinal", s)),
    }
}

/// Maps a 1-based absolute position in an `n`-sound scene to its coarse
/// global position. The outer thirds are `round(0.3 n)` sounds wide, which
/// gives the 3/4/3 partition for ten sounds.
pub fn global_position_of(position: usize, n: usize) -> GlobalPosition {
    let edge = ((n as f64) * 0.3).round() as usize;
    if position <= edge {
        GlobalPosition::Beginning
    } else if position > n - edge {
        GlobalPosition::End
    } else {
        GlobalPosition::Middle
    }
}
