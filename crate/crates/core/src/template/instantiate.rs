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

//! Rejection-sampled template instantiation.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::validate::{check_degenerate, hint_violation};
use super::{realize_text, Bindings, QaInstance, QuestionTemplate};
use crate::dsl::{answer_of, execute_program, ExecError};
use crate::scene::SymbolicScene;
use crate::seed;

/// Why a binding, or a whole instantiation attempt, was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    /// A binding predicate of the template failed.
    Constraint,
    /// Some `unique` saw a set that is not a singleton.
    IllPosed,
    /// A relation can be bypassed without changing the answer.
    Degenerate,
    /// The answer is spelled out in the queried sound's description.
    Hint,
    /// The question touches a sound of ambiguous brightness.
    Ambiguous,
    /// The same template and bindings were already used for this scene.
    Duplicate,
    /// The bound program is ill-typed at run time or its value is not an answer.
    Program,
    /// No accepted binding within the attempt budget.
    Budget,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok();
        f.write_str(s.as_ref().and_then(|v| v.as_str()).unwrap_or("?"))
    }
}

/// Runs the full validation pipeline for one binding.
pub fn instantiate_with(
    template: &QuestionTemplate,
    scene: &SymbolicScene,
    bindings: &Bindings,
    text_seed: u64,
) -> Result<QaInstance, Rejection> {
    if !template.constraints.iter().all(|c| c.holds(bindings)) {
        return Err(Rejection::Constraint);
    }
    let program = template.bind(bindings).map_err(|_| Rejection::Program)?;
    let value = execute_program(&program, scene).map_err(|e| match e {
        ExecError::IllPosed { .. } => Rejection::IllPosed,
        ExecError::Ambiguous { .. } => Rejection::Ambiguous,
        ExecError::Type { .. } => Rejection::Program,
    })?;
    let answer = answer_of(value, template.family).map_err(|_| Rejection::Program)?;
    if check_degenerate(&program, scene) {
        return Err(Rejection::Degenerate);
    }
    if hint_violation(&program, &answer) {
        return Err(Rejection::Hint);
    }
    let text = realize_text(template, bindings, text_seed).map_err(|_| Rejection::Program)?;
    Ok(QaInstance {
        question_id: 0,
        scene_id: scene.scene_id,
        template_id: template.template_id.clone(),
        family: template.family,
        text,
        bindings: bindings
            .iter()
            .map(|(k, v)| (k.clone(), v.map(|l| l.as_str().to_string())))
            .collect(),
        program,
        answer,
    })
}

/// Draws each slot uniformly from its domain, null counting as one more value.
pub fn sample_bindings<R: Rng>(template: &QuestionTemplate, rng: &mut R) -> Bindings {
    template
        .slots
        .iter()
        .map(|s| {
            let values = s.domain.values();
            let n = values.len() + usize::from(s.nullable);
            let i = rng.gen_range(0..n);
            (s.name.clone(), values.get(i).copied())
        })
        .collect()
}

/// Like [`instantiate`], additionally rejecting bindings for which
/// `is_duplicate` returns true.
pub fn instantiate_filtered(
    template: &QuestionTemplate,
    scene: &SymbolicScene,
    seed_value: u64,
    budget: usize,
    mut is_duplicate: impl FnMut(&Bindings) -> bool,
) -> Result<QaInstance, Rejection> {
    assert!(budget > 0, "budget must be positive");
    let mut rng = seed::rng(seed_value);
    for _ in 0..budget {
        let bindings = sample_bindings(template, &mut rng);
        if is_duplicate(&bindings) {
            continue;
        }
        let text_seed: u64 = rng.gen();
        if let Ok(q) = instantiate_with(template, scene, &bindings, text_seed) {
            return Ok(q);
        }
    }
    Err(Rejection::Budget)
}

/// Samples bindings until one passes validation or `budget` attempts are spent.
pub fn instantiate(
    template: &QuestionTemplate,
    scene: &SymbolicScene,
    seed_value: u64,
    budget: usize,
) -> Result<QaInstance, Rejection> {
    instantiate_filtered(template, scene, seed_value, budget, |_| false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attributes::{Brightness, Instrument, Loudness, Note};
    use crate::audio::Waveform;
    use crate::bank::ElementarySound;
    use crate::dsl::{Answer, Literal};
    use crate::template::TemplateSet;

    fn scene(spec: &[(Instrument, Loudness)]) -> SymbolicScene {
        let sounds: Vec<ElementarySound> = spec
            .iter()
            .enumerate()
            .map(|(i, &(instrument, loudness_label))| ElementarySound {
                id: format!("s{i}"),
                instrument,
                note: Note::ALL[i % 12],
                loudness_label,
                brightness_label: Brightness::Bright,
                measured_lufs: -20.0,
                spectral_centroid: 2500.0,
                duration_ms: 1.0,
                audio: Waveform::silence(48, 48_000),
            })
            .collect();
        let refs: Vec<&ElementarySound> = sounds.iter().collect();
        SymbolicScene::from_sounds(0, &refs)
    }

    fn louder_template() -> QuestionTemplate {
        QuestionTemplate::from_json(
            "louder",
            r#"{"template_id":"louder","family":"yes_no",
                "text_variants":["Is the <I1> louder than the <I2>?"],
                "slots":[{"name":"I1","domain":"instrument"},{"name":"I2","domain":"instrument"}],
                "constraints":[{"kind":"distinct","slots":["I1","I2"]}],
                "program":{"nodes":[
                  {"kind":"scene"},
                  {"kind":"filter_instrument","inputs":[0],"value_args":["<I1>"]},
                  {"kind":"unique","inputs":[1]},
                  {"kind":"query_loudness","inputs":[2]},
                  {"kind":"filter_instrument","inputs":[0],"value_args":["<I2>"]},
                  {"kind":"unique","inputs":[4]},
                  {"kind":"query_loudness","inputs":[5]},
                  {"kind":"equal_attribute","inputs":[3,6]}]}}"#,
        )
        .unwrap()
    }

    fn violin_after_trumpet() -> QuestionTemplate {
        QuestionTemplate::from_json(
            "violin",
            r#"{"template_id":"violin","family":"absolute_position",
                "text_variants":["What is the position of the <I2> playing <R> the <I1>?",
                                 "Where is the <I2> that plays <R> the <I1>?"],
                "slots":[{"name":"I1","domain":"instrument"},{"name":"R","domain":"relation"},
                         {"name":"I2","domain":"instrument"}],
                "program":{"nodes":[
                  {"kind":"scene"},
                  {"kind":"filter_instrument","inputs":[0],"value_args":["<I1>"]},
                  {"kind":"unique","inputs":[1]},
                  {"kind":"relate","inputs":[2],"value_args":["<R>"]},
                  {"kind":"filter_instrument","inputs":[3],"value_args":["<I2>"]},
                  {"kind":"unique","inputs":[4]},
                  {"kind":"query_absolute_position","inputs":[5]}]}}"#,
        )
        .unwrap()
    }

    fn bind(pairs: &[(&str, Literal)]) -> Bindings {
        pairs.iter().map(|(k, v)| (k.to_string(), Some(*v))).collect()
    }

    use Instrument::*;
    use Loudness::*;

    #[test]
    fn flute_louder_than_flute_violates_constraint() {
        let s = scene(&[(Flute, Loud), (Cello, Quiet), (Violin, Loud)]);
        let b = bind(&[("I1", Literal::Instrument(Flute)), ("I2", Literal::Instrument(Flute))]);
        assert_eq!(
            instantiate_with(&louder_template(), &s, &b, 0).unwrap_err(),
            Rejection::Constraint
        );
    }

    fn after(i1: Instrument, i2: Instrument) -> Bindings {
        bind(&[
            ("I1", Literal::Instrument(i1)),
            ("R", Literal::Relation(crate::attributes::Relation::After)),
            ("I2", Literal::Instrument(i2)),
        ])
    }

    #[test]
    fn several_violins_after_trumpet_is_ill_posed() {
        let s = scene(&[(Trumpet, Loud), (Violin, Loud), (Cello, Quiet), (Violin, Quiet)]);
        let r = instantiate_with(&violin_after_trumpet(), &s, &after(Trumpet, Violin), 0);
        assert_eq!(r.unwrap_err(), Rejection::IllPosed);
    }

    #[test]
    fn single_violin_is_degenerate() {
        let s = scene(&[(Cello, Loud), (Trumpet, Loud), (Violin, Quiet), (Flute, Quiet)]);
        let r = instantiate_with(&violin_after_trumpet(), &s, &after(Trumpet, Violin), 0);
        assert_eq!(r.unwrap_err(), Rejection::Degenerate);
    }

    #[test]
    fn relation_that_disambiguates_is_accepted() {
        let s = scene(&[(Violin, Loud), (Trumpet, Loud), (Violin, Quiet), (Flute, Quiet)]);
        let q = instantiate_with(&violin_after_trumpet(), &s, &after(Trumpet, Violin), 0).unwrap();
        assert_eq!(q.answer, Answer::Ordinal(3));
        assert_eq!(
            answer_of(execute_program(&q.program, &s).unwrap(), q.family).unwrap(),
            q.answer
        );
    }

    #[test]
    fn sampled_instances_reexecute_to_their_answer() {
        let s = scene(&[
            (Violin, Loud),
            (Trumpet, Loud),
            (Violin, Quiet),
            (Flute, Quiet),
            (Cello, Loud),
            (Clarinet, Quiet),
            (Flute, Loud),
            (Cello, Quiet),
            (Trumpet, Quiet),
            (Clarinet, Loud),
        ]);
        let set = TemplateSet::default_set();
        let mut accepted = 0;
        for (i, t) in set.templates().iter().enumerate() {
            for k in 0..5 {
                if let Ok(q) = instantiate(t, &s, (i * 31 + k) as u64, 200) {
                    let v = execute_program(&q.program, &s).unwrap();
                    assert_eq!(answer_of(v, q.family).unwrap(), q.answer, "{}", q.template_id);
                    assert!(!q.text.contains('<'), "{}", q.text);
                    accepted += 1;
                }
            }
        }
        assert!(accepted > 100, "{accepted}");
    }

    #[test]
    fn exhausted_budget_is_a_rejection() {
        // No instrument occurs twice, so "the <I2> after the <I1>" is always degenerate.
        let s = scene(&[(Violin, Loud), (Trumpet, Loud), (Flute, Quiet)]);
        assert_eq!(
            instantiate(&violin_after_trumpet(), &s, 3, 50).unwrap_err(),
            Rejection::Budget
        );
    }

    #[test]
    fn text_variants_are_balanced() {
        let s = scene(&[(Violin, Loud), (Trumpet, Loud), (Violin, Quiet)]);
        let t = violin_after_trumpet();
        let b = after(Trumpet, Violin);
        let first = (0..1000u64)
            .filter(|&seed| instantiate_with(&t, &s, &b, seed).unwrap().text.starts_with("What"))
            .count();
        assert!((450..=550).contains(&first), "{first}");
    }

    #[test]
    fn rejection_display_is_snake_case() {
        assert_eq!(Rejection::IllPosed.to_string(), "ill_posed");
    }
}
