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

//! Seed splitting.
//!
//! Every random draw in a dataset is keyed on `(master_seed, stream, index...)`
//! so that any scene or question can be regenerated on its own, in any order,
//! on any number of workers. The mixer is SplitMix64's finalizer applied to
//! the running state after folding in each component.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random streams used by the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Split = 1,
    Scene = 2,
    QuestionCount = 3,
    Question = 4,
    Noise = 5,
    Synth = 6,
    TemplateOrder = 7,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a master seed, a stream tag and any number of indices.
pub fn derive(master: u64, stream: Stream, indices: &[u64]) -> u64 {
    let mut state = splitmix64(master ^ splitmix64(stream as u64));
    for &i in indices {
        state = splitmix64(state ^ splitmix64(i.wrapping_add(0x632B_E59B_D9B4_E019)));
    }
    state
}

/// RNG for a derived seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
