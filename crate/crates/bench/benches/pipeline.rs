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

use aqagen_core::bank::{measure_loudness, synthesize_bank, SynthSpec};
use aqagen_core::dataset::{compose_scenes, generate_questions, split_scenes, SplitRatios};
use aqagen_core::dsl::execute_program;
use aqagen_core::render::{canvas_for, compute_spectrogram, render_scene, StftParams};
use aqagen_core::scene::{compose_scene, ComposeConfig, Split};
use aqagen_core::template::TemplateSet;
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn pipeline(c: &mut Criterion) {
    let bank = synthesize_bank(&SynthSpec::standard(), 0).unwrap();
    let templates = TemplateSet::default_set();
    let scene = compose_scene(&bank, 0, 1, Split::Train, ComposeConfig::default()).unwrap();
    let canvas = canvas_for([&scene]);

    c.bench_function("compose_scene", |b| {
        let mut id = 0u64;
        b.iter(|| {
            id += 1;
            compose_scene(&bank, id, 1, Split::Train, ComposeConfig::default()).unwrap()
        })
    });

    let splits = split_scenes(20, &SplitRatios::default(), 1).unwrap();
    let scenes = compose_scenes(&bank, &splits, 1, ComposeConfig::default()).unwrap();
    c.bench_function("questions_20_scenes_x40", |b| {
        b.iter(|| generate_questions(black_box(&scenes), &templates, 1, (40, 40), 200).unwrap())
    });

    let questions = generate_questions(&scenes[..1], &templates, 1, (40, 40), 200).unwrap();
    c.bench_function("execute_40_programs", |b| {
        b.iter(|| {
            for q in &questions {
                black_box(execute_program(&q.program, &scenes[0]).unwrap());
            }
        })
    });

    let mut slow = c.benchmark_group("audio");
    slow.sample_size(10);
    slow.bench_function("render_scene", |b| {
        b.iter(|| render_scene(&scene, &bank, canvas).unwrap())
    });
    let audio = render_scene(&scene, &bank, canvas).unwrap().audio;
    slow.bench_function("loudness", |b| b.iter(|| measure_loudness(black_box(&audio)).unwrap()));
    slow.bench_function("spectrogram", |b| {
        b.iter(|| compute_spectrogram(black_box(&audio), StftParams::default()).unwrap())
    });
    slow.finish();
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
