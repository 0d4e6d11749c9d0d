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

//! Train/val/test assignment.

use rand::seq::SliceRandom;

use super::{DatasetError, SplitRatios};
use crate::scene::Split;
use crate::seed::{self, Stream};

/// Split sizes by largest-remainder rounding. Equal remainders favour the
/// later split.
pub fn split_counts(n: usize, ratios: &SplitRatios) -> Result<[usize; 3], DatasetError> {
    ratios.validate()?;
    let quotas = ratios.as_array().map(|r| r * n as f64);
    let mut counts = quotas.map(|q| q.floor() as usize);
    let mut rest = n - counts.iter().sum::<usize>();
    let mut order = [0usize, 1, 2];
    let frac = |i: usize| quotas[i] - quotas[i].floor();
    order.sort_by(|&a, &b| {
        let (fa, fb) = (frac(a), frac(b));
        if (fa - fb).abs() < 1e-9 {
            b.cmp(&a)
        } else {
            fb.total_cmp(&fa)
        }
    });
    for &i in order.iter().cycle() {
        if rest == 0 {
            break;
        }
        counts[i] += 1;
        rest -= 1;
    }
    Ok(counts)
}

/// Assigns splits to scene ids `0..n` deterministically for `master_seed`.
pub fn split_scenes(n: usize, ratios: &SplitRatios, master_seed: u64) -> Result<Vec<Split>, DatasetError> {
    if n == 0 {
        return Err(DatasetError::Config("cannot split zero scenes".into()));
    }
    let counts = split_counts(n, ratios)?;
    let mut out: Vec<Split> = Split::ALL
        .iter()
        .zip(counts)
        .flat_map(|(s, c)| std::iter::repeat_n(*s, c))
        .collect();
    out.shuffle(&mut seed::rng(seed::derive(master_seed, Stream::Split, &[])));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fifty_thousand_scenes() {
        assert_eq!(
            split_counts(50_000, &SplitRatios::default()).unwrap(),
            [35_000, 7_500, 7_500]
        );
    }

    #[test]
    fn ten_scenes() {
        assert_eq!(split_counts(10, &SplitRatios::default()).unwrap(), [7, 1, 2]);
    }

    #[test]
    fn assignment_is_seeded() {
        let r = SplitRatios::default();
        assert_eq!(split_scenes(100, &r, 5).unwrap(), split_scenes(100, &r, 5).unwrap());
        assert_ne!(split_scenes(100, &r, 5).unwrap(), split_scenes(100, &r, 6).unwrap());
    }

    #[test]
    fn degenerate_ratios() {
        let r = SplitRatios {
            train: 0.5,
            val: 0.5,
            test: 0.0,
        };
        assert!(split_scenes(10, &r, 0).is_err());
        assert!(split_scenes(0, &SplitRatios::default(), 0).is_err());
    }

    proptest! {
        #[test]
        fn counts_sum_and_stay_within_one(n in 1usize..100_000, a in 0.05f64..0.9, b in 0.05f64..0.9) {
            prop_assume!(a + b < 0.95);
            let r = SplitRatios { train: a, val: b, test: 1.0 - a - b };
            let c = split_counts(n, &r).unwrap();
            prop_assert_eq!(c.iter().sum::<usize>(), n);
            for (k, q) in c.iter().zip(r.as_array()) {
                prop_assert!((*k as f64 - q * n as f64).abs() < 1.0 + 1e-6);
            }
        }
    }
}
