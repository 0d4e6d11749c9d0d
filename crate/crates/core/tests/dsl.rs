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

mod common;

use aqagen_core::attributes::Relation;
use aqagen_core::dsl::{
    answer_of, execute_program, parse_program, ExecError, Literal, NodeKind, ProgramBuilder, ProgramError, SoundSet,
    Value,
};
use aqagen_core::{Answer, Brightness, Instrument, Loudness, Note, QuestionFamily, SymbolicScene};
use proptest::prelude::*;

use Instrument::*;

#[test]
fn counts_the_flutes() {
    let s = common::instruments(&[
        Cello, Violin, Flute, Trumpet, Flute, Clarinet, Cello, Violin, Trumpet, Clarinet,
    ]);
    let p = parse_program(
        r#"{"nodes":[{"kind":"scene"},{"kind":"filter_instrument","inputs":[0],"value_args":["flute"]},
                     {"kind":"count","inputs":[1]}]}"#,
    )
    .unwrap();
    assert_eq!(p.nodes().len(), 3);
    assert_eq!(p.output(), 2);
    // Brute force: count directly on the symbolic scene.
    let direct = s.sounds.iter().filter(|x| x.instrument == Flute).count();
    assert_eq!(execute_program(&p, &s).unwrap(), Value::Integer(direct as u8));
    assert_eq!(direct, 2);
}

#[test]
fn flute_after_the_second_clarinet_is_fifth() {
    let s = common::instruments(&[
        Violin, Clarinet, Trumpet, Clarinet, Flute, Cello, Violin, Trumpet, Cello, Violin,
    ]);
    let mut b = ProgramBuilder::new();
    let scene = b.scene();
    let clar = b.filter(NodeKind::FilterInstrument, scene, Literal::Instrument(Clarinet));
    let second = b.filter(NodeKind::FilterRelativePosition, clar, Literal::Ordinal(2));
    let anchor = b.unary(NodeKind::Unique, second);
    let after = b.filter(NodeKind::Relate, anchor, Literal::Relation(Relation::After));
    let flute = b.filter(NodeKind::FilterInstrument, after, Literal::Instrument(Flute));
    let target = b.unary(NodeKind::Unique, flute);
    b.unary(NodeKind::QueryAbsolutePosition, target);
    let p = b.build().unwrap();
    let v = execute_program(&p, &s).unwrap();
    let a = answer_of(v, QuestionFamily::AbsolutePosition).unwrap();
    assert_eq!(a, Answer::Ordinal(5));
    assert_eq!(a.surface(), "fifth");
}

#[test]
fn no_trumpet_means_no() {
    let s = common::instruments(&[Cello, Violin, Flute]);
    let mut b = ProgramBuilder::new();
    let scene = b.scene();
    let f = b.filter(NodeKind::FilterInstrument, scene, Literal::Instrument(Trumpet));
    b.unary(NodeKind::Exist, f);
    let v = execute_program(&b.build().unwrap(), &s).unwrap();
    assert_eq!(v, Value::Boolean(false));
    assert_eq!(answer_of(v, QuestionFamily::YesNo).unwrap(), Answer::No);
}

#[test]
fn parse_errors() {
    let cycle = r#"{"nodes":[{"kind":"count","inputs":[0]}]}"#;
    assert!(matches!(parse_program(cycle), Err(ProgramError::Cycle { .. })));
    let h = r#"{"nodes":[{"kind":"scene"},{"kind":"filter_note","inputs":[0],"value_args":["H"]},{"kind":"count","inputs":[1]}]}"#;
    assert!(matches!(parse_program(h), Err(ProgramError::UnknownLiteral { .. })));
}

#[test]
fn ambiguous_brightness_is_not_an_answer() {
    let s = common::scene(&[(Flute, Note::A, Loudness::Loud, Brightness::None)]);
    let p = parse_program(
        r#"{"nodes":[{"kind":"scene"},{"kind":"unique","inputs":[0]},{"kind":"query_brightness","inputs":[1]}]}"#,
    )
    .unwrap();
    assert!(matches!(execute_program(&p, &s), Err(ExecError::Ambiguous { .. })));
}

fn arb_scene() -> impl Strategy<Value = SymbolicScene> {
    prop::collection::vec((0..5usize, 0..12usize, 0..2usize, 0..3usize), 1..=10).prop_map(|v| {
        let spec: Vec<_> = v
            .into_iter()
            .map(|(i, n, l, b)| (Instrument::ALL[i], Note::ALL[n], Loudness::ALL[l], Brightness::ALL[b]))
            .collect();
        common::scene(&spec)
    })
}

fn set(v: Value) -> SoundSet {
    match v {
        Value::SoundSet(s) => s,
        other => panic!("expected a set, got {other:?}"),
    }
}

proptest! {
    #[test]
    fn filters_commute(s in arb_scene(), i in 0..5usize, l in 0..2usize) {
        let run = |first_instrument: bool| {
            let mut b = ProgramBuilder::new();
            let sc = b.scene();
            let ins = Literal::Instrument(Instrument::ALL[i]);
            let loud = Literal::Loudness(Loudness::ALL[l]);
            let (k1, l1, k2, l2) = if first_instrument {
                (NodeKind::FilterInstrument, ins, NodeKind::FilterLoudness, loud)
            } else {
                (NodeKind::FilterLoudness, loud, NodeKind::FilterInstrument, ins)
            };
            let a = b.filter(k1, sc, l1);
            b.filter(k2, a, l2);
            set(execute_program(&b.build().unwrap(), &s).unwrap())
        };
        prop_assert_eq!(run(true), run(false));
    }

    #[test]
    fn relations_partition_the_scene(s in arb_scene(), k in 1..=10u8) {
        prop_assume!((k as usize) <= s.sounds.len());
        let rel = |r: Relation| {
            let mut b = ProgramBuilder::new();
            let sc = b.scene();
            let f = b.filter(NodeKind::FilterAbsolutePosition, sc, Literal::Ordinal(k));
            let u = b.unary(NodeKind::Unique, f);
            b.filter(NodeKind::Relate, u, Literal::Relation(r));
            set(execute_program(&b.build().unwrap(), &s).unwrap())
        };
        let (before, after) = (rel(Relation::Before), rel(Relation::After));
        let me = SoundSet::from_indices([k as usize - 1]);
        prop_assert!(before.intersection(after).is_empty());
        prop_assert_eq!(before.union(after).union(me), SoundSet::all(s.sounds.len()));
        prop_assert_eq!(before.len(), k as usize - 1);
    }

    #[test]
    fn same_excludes_the_reference(s in arb_scene(), k in 1..=10u8, which in 0..4usize) {
        prop_assume!((k as usize) <= s.sounds.len());
        let kind = [NodeKind::SameInstrument, NodeKind::SameNote, NodeKind::SameLoudness, NodeKind::SameBrightness][which];
        let mut b = ProgramBuilder::new();
        let sc = b.scene();
        let f = b.filter(NodeKind::FilterAbsolutePosition, sc, Literal::Ordinal(k));
        let u = b.unary(NodeKind::Unique, f);
        let same = b.unary(kind, u);
        b.unary(NodeKind::Count, same);
        match execute_program(&b.build().unwrap(), &s) {
            Ok(Value::Integer(n)) => {
                prop_assert!(n <= 9);
                prop_assert!((n as usize) < s.sounds.len());
            }
            Err(ExecError::Ambiguous { .. }) => {
                prop_assert_eq!(kind, NodeKind::SameBrightness);
                prop_assert_eq!(s.sounds[k as usize - 1].brightness, Brightness::None);
            }
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    #[test]
    fn unique_is_ill_posed_unless_singleton(s in arb_scene(), i in 0..5usize) {
        let mut b = ProgramBuilder::new();
        let sc = b.scene();
        let f = b.filter(NodeKind::FilterInstrument, sc, Literal::Instrument(Instrument::ALL[i]));
        let u = b.unary(NodeKind::Unique, f);
        b.unary(NodeKind::QueryNote, u);
        let n = s.sounds.iter().filter(|x| x.instrument == Instrument::ALL[i]).count();
        let r = execute_program(&b.build().unwrap(), &s);
        prop_assert_eq!(r.is_ok(), n == 1);
        if n != 1 {
            prop_assert!(matches!(r, Err(ExecError::IllPosed { size, .. }) if size == n), "{:?}", r);
        }
    }
}
