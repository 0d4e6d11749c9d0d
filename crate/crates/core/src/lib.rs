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

//! Acoustic question answering dataset generation.
//!
//! The crate builds annotated scenes out of a bank of elementary sounds,
//! renders them with a noise floor and room reverberation, and pairs each
//! scene with natural-language questions whose answers come from executing
//! a functional program against the symbolic scene.
//!
//! Layout:
//!
//! * [`bank`] ingests or synthesizes elementary sounds and annotates them
//!   (silence trimming, integrated loudness, spectral-centroid brightness).
//! * [`scene`] composes ten-sound symbolic scenes and derives positions.
//! * [`render`] turns scenes into audio, WAV files and spectrograms.
//! * [`dsl`] is the program representation and its executor (the oracle).
//! * [`template`] instantiates question templates and rejects invalid ones.
//! * [`dataset`] orchestrates generation, splits, manifests and statistics.

pub mod attributes;
pub mod audio;
pub mod bank;
pub mod dataset;
pub mod dsl;
pub mod render;
pub mod scene;
pub mod seed;
pub mod template;

pub use attributes::{Brightness, GlobalPosition, Instrument, Loudness, Note, Relation};
pub use audio::{Waveform, SAMPLE_RATE};
pub use bank::{ElementarySound, SoundBank};
pub use dsl::{Answer, Program, QuestionFamily, Value};
pub use scene::{PlacedSound, PostProcessParams, Split, SymbolicScene};
pub use template::{QaInstance, QuestionTemplate, Rejection, TemplateSet};
