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

//! Surface realization of bound templates.

use rand::Rng;

use super::{Bindings, QuestionTemplate, TemplateError};
use crate::seed;

fn starts_with_vowel_sound(word: &str) -> bool {
    // Letter names A, E and F are read with a leading vowel.
    let note_letter = matches!(
        word.trim_end_matches(['#', '?', ',', '.']),
        "A" | "E" | "F" | "A#" | "E#" | "F#"
    );
    note_letter
        || word
            .chars()
            .next()
            .is_some_and(|c| matches!(c.to_ascii_lowercase(), 'a' | 'e' | 'i' | 'o' | 'u') && c.is_lowercase())
}

/// Collapses the gaps left by null slots and fixes `a`/`an` before the
/// word that actually follows.
fn tidy(text: &str) -> String {
    let words: Vec<&str> = text.split_whitespace().collect();
    let mut out: Vec<String> = Vec::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        let next = words.get(i + 1).copied().unwrap_or("");
        let fixed = match *w {
            "a" | "an" | "A" | "An" => {
                let an = starts_with_vowel_sound(next);
                let lower = if an { "an" } else { "a" };
                if w.starts_with('A') {
                    let mut c = lower.chars();
                    c.next().unwrap().to_uppercase().chain(c).collect()
                } else {
                    lower.to_string()
                }
            }
            _ => w.to_string(),
        };
        out.push(fixed);
    }
    let mut s = out.join(" ");
    for p in ["?", ",", "."] {
        s = s.replace(&format!(" {p}"), p);
    }
    s
}

/// Substitutes bindings into one template variant.
pub fn substitute(variant: &str, bindings: &Bindings) -> Result<String, TemplateError> {
    let mut out = String::with_capacity(variant.len());
    let mut rest = variant;
    while let Some(open) = rest.find('<') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let Some(close) = after.find('>') else {
            out.push_str(&rest[open..]);
            rest = "";
            break;
        };
        let name = &after[..close];
        match bindings.get(name) {
            None => return Err(TemplateError::Unbound(name.to_string())),
            Some(Some(lit)) => out.push_str(lit.as_str()),
            Some(None) => {}
        }
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    Ok(tidy(&out))
}

/// Picks one text variant uniformly for `seed` and fills in the bindings.
pub fn realize_text(
    template: &QuestionTemplate,
    bindings: &Bindings,
    seed_value: u64,
) -> Result<String, TemplateError> {
    if let Some(s) = template.slots.iter().find(|s| !bindings.contains_key(&s.name)) {
        return Err(TemplateError::Unbound(s.name.clone()));
    }
    let i = seed::rng(seed_value).gen_range(0..template.text_variants.len());
    substitute(&template.text_variants[i], bindings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attributes::{Instrument, Note};
    use crate::dsl::Literal;

    fn b(pairs: &[(&str, Option<Literal>)]) -> Bindings {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn table_surface_string() {
        let s = substitute(
            "What is the note played by the <I> that is after the loud bright <N> note?",
            &b(&[
                ("I", Some(Literal::Instrument(Instrument::Flute))),
                ("N", Some(Literal::Note(Note::D))),
            ]),
        )
        .unwrap();
        assert_eq!(
            s,
            "What is the note played by the flute that is after the loud bright D note?"
        );
    }

    #[test]
    fn nulls_and_articles() {
        let s = substitute(
            "Is there a <L> <I> sound?",
            &b(&[("L", None), ("I", Some(Literal::Instrument(Instrument::Violin)))]),
        )
        .unwrap();
        assert_eq!(s, "Is there a violin sound?");
        let s = substitute("Is there a <N> note?", &b(&[("N", Some(Literal::Note(Note::FSharp)))])).unwrap();
        assert_eq!(s, "Is there an F# note?");
        let s = substitute("Is there a <N> note?", &b(&[("N", Some(Literal::Note(Note::G)))])).unwrap();
        assert_eq!(s, "Is there a G note?");
    }

    #[test]
    fn unbound_is_error() {
        assert!(matches!(
            substitute("the <X>", &Bindings::new()),
            Err(TemplateError::Unbound(_))
        ));
    }
}
