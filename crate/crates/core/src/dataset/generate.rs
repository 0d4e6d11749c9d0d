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

//! Generation stages and the end-to-end driver.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::io::{self, DatasetManifest, SplitCounts};
use super::{split_scenes, BankSource, DatasetConfig, DatasetError};
use crate::bank::{self, synth, IngestConfig, SoundBank};
use crate::dsl::{answer_of, execute_program};
use crate::render::{self, compute_spectrogram, StftParams};
use crate::scene::{compose_scene, ComposeConfig, Split, SymbolicScene};
use crate::seed::{self, Stream};
use crate::template::{instantiate_filtered, load_templates, Bindings, QaInstance, TemplateSet};

/// Everything [`generate_dataset`] produced, besides the files it wrote.
#[derive(Debug, Clone)]
pub struct GeneratedDataset {
    pub manifest: DatasetManifest,
    pub scenes: Vec<SymbolicScene>,
    pub questions: Vec<QaInstance>,
}

pub fn build_bank(source: &BankSource) -> Result<SoundBank, DatasetError> {
    Ok(match source {
        BankSource::Synthetic { seed } => synth::synthesize_bank(&synth::SynthSpec::standard(), *seed)?,
        BankSource::Directory { path, resample } => bank::ingest_bank(
            path,
            &IngestConfig {
                resample: *resample,
                ..IngestConfig::default()
            },
        )?,
    })
}

pub fn load_template_set(dir: Option<&Path>) -> Result<TemplateSet, DatasetError> {
    let set = match dir {
        Some(d) => load_templates(d)?,
        None => TemplateSet::default_set(),
    };
    Ok(set)
}

/// Composes one scene per entry of `splits`; scene ids are the indices.
pub fn compose_scenes(
    bank: &SoundBank,
    splits: &[Split],
    master_seed: u64,
    config: ComposeConfig,
) -> Result<Vec<SymbolicScene>, DatasetError> {
    splits
        .par_iter()
        .enumerate()
        .map(|(i, &split)| Ok(compose_scene(bank, i as u64, master_seed, split, config)?))
        .collect()
}

/// Uses of one template per scene before the others must be exhausted.
const MAX_REPEATS: usize = 3;

fn question_count(master_seed: u64, scene_id: u64, range: (usize, usize)) -> usize {
    seed::rng(seed::derive(master_seed, Stream::QuestionCount, &[scene_id])).gen_range(range.0..=range.1)
}

fn surface(b: &Bindings) -> BTreeMap<String, Option<String>> {
    b.iter()
        .map(|(k, v)| (k.clone(), v.map(|l| l.as_str().to_string())))
        .collect()
}

/// Generates the questions of every scene.
///
/// Every template is first probed once on every scene. Scenes are then
/// visited in id order and each takes its questions from the templates it
/// supports that have been used least so far, with seeded tie-breaking
/// and at most [`MAX_REPEATS`] uses of a template per scene when avoidable.
/// This keeps template usage flat even when some templates only fit a
/// fraction of the scenes. The assignment is sequential and cheap; probing
/// and instantiation run in parallel. `scenes` must be sorted by id.
pub fn generate_questions(
    scenes: &[SymbolicScene],
    templates: &TemplateSet,
    master_seed: u64,
    questions_per_scene: (usize, usize),
    budget: usize,
) -> Result<Vec<QaInstance>, DatasetError> {
    let t = templates.templates();
    let instance_seed = |scene: &SymbolicScene, ti: usize, rep: usize| {
        seed::derive(master_seed, Stream::Question, &[scene.scene_id, ti as u64, rep as u64])
    };

    let probes: Vec<Vec<Option<QaInstance>>> = scenes
        .par_iter()
        .map(|scene| {
            (0..t.len())
                .map(|ti| instantiate_filtered(&t[ti], scene, instance_seed(scene, ti, 0), budget, |_| false).ok())
                .collect()
        })
        .collect();

    let mut usage = vec![0usize; t.len()];
    let mut plans: Vec<Vec<usize>> = Vec::with_capacity(scenes.len());
    for (scene, probe) in scenes.iter().zip(&probes) {
        let count = question_count(master_seed, scene.scene_id, questions_per_scene);
        let feasible: Vec<usize> = (0..t.len()).filter(|&ti| probe[ti].is_some()).collect();
        if feasible.is_empty() && count > 0 {
            return Err(DatasetError::Question {
                scene_id: scene.scene_id,
                reason: "no template can be instantiated on this scene".into(),
            });
        }
        let mut rng = seed::rng(seed::derive(master_seed, Stream::TemplateOrder, &[scene.scene_id]));
        let tiebreak: Vec<u64> = (0..t.len()).map(|_| rng.gen()).collect();
        let mut plan = Vec::with_capacity(count);
        let mut taken = vec![0usize; t.len()];
        while plan.len() < count {
            let open: Vec<usize> = feasible.iter().copied().filter(|&ti| taken[ti] < MAX_REPEATS).collect();
            let pool = if open.is_empty() { &feasible } else { &open };
            let &ti = pool
                .iter()
                .min_by_key(|&&ti| (usage[ti], taken[ti], tiebreak[ti]))
                .expect("feasible is not empty");
            taken[ti] += 1;
            usage[ti] += 1;
            plan.push(ti);
        }
        plan.shuffle(&mut rng);
        plans.push(plan);
    }

    let offsets: Vec<usize> = plans
        .iter()
        .scan(0usize, |acc, p| {
            let o = *acc;
            *acc += p.len();
            Some(o)
        })
        .collect();
    let per_scene: Vec<Vec<QaInstance>> = scenes
        .par_iter()
        .zip(probes.into_par_iter())
        .zip(plans.par_iter().zip(offsets.par_iter()))
        .map(|((scene, mut probe), (plan, &offset))| {
            let mut used: HashSet<(usize, BTreeMap<String, Option<String>>)> = HashSet::new();
            let mut reps = vec![0usize; t.len()];
            let mut out = Vec::with_capacity(plan.len());
            for (j, &wanted) in plan.iter().enumerate() {
                // Repeats of a template need fresh, non-duplicate bindings; if
                // none exist, fall back to the other templates in plan order.
                let candidates = std::iter::once(wanted).chain(plan.iter().copied().filter(|&x| x != wanted));
                let mut found = None;
                for ti in candidates {
                    let q = match probe[ti].take() {
                        Some(q) => Some(q),
                        None => {
                            reps[ti] += 1;
                            let s = instance_seed(scene, ti, reps[ti]);
                            instantiate_filtered(&t[ti], scene, s, budget, |b| used.contains(&(ti, surface(b)))).ok()
                        }
                    };
                    if let Some(q) = q {
                        found = Some((ti, q));
                        break;
                    }
                }
                let (ti, mut q) = found.ok_or_else(|| DatasetError::Question {
                    scene_id: scene.scene_id,
                    reason: format!("no template could be instantiated for question {j}"),
                })?;
                used.insert((ti, q.bindings.clone()));
                q.question_id = (offset + j) as u64;
                let check = execute_program(&q.program, scene)
                    .ok()
                    .and_then(|v| answer_of(v, q.family).ok());
                if check != Some(q.answer) {
                    return Err(DatasetError::Question {
                        scene_id: scene.scene_id,
                        reason: format!(
                            "question {}: oracle re-execution disagrees with the stored answer",
                            q.question_id
                        ),
                    });
                }
                out.push(q);
            }
            log::info!("scene {}: {} questions", scene.scene_id, out.len());
            Ok(out)
        })
        .collect::<Result<_, DatasetError>>()?;
    Ok(per_scene.into_iter().flatten().collect())
}

/// Renders and writes the audio (and optionally spectrograms) of `scenes`.
/// Returns digests keyed by path relative to `root`.
pub fn render_audio(
    scenes: &[SymbolicScene],
    bank: &SoundBank,
    canvas_ms: f64,
    root: &Path,
    spectrograms: bool,
) -> Result<BTreeMap<String, String>, DatasetError> {
    let entries: Vec<Vec<(String, String)>> = scenes
        .par_iter()
        .map(|scene| {
            let rendered = render::render_scene(scene, bank, canvas_ms)?;
            let mut out = Vec::new();
            let path = io::audio_path(root, scene.split, scene.scene_id);
            let bytes = render::wav::encode_wav(&rendered.audio);
            write_file(&path, &bytes)?;
            out.push((relative(root, &path), io::digest_bytes(&bytes)));
            if spectrograms {
                let spec = compute_spectrogram(&rendered.audio, StftParams::default())?;
                let path = io::spectrogram_path(root, scene.split, scene.scene_id);
                let bytes = spec.to_bytes();
                write_file(&path, &bytes)?;
                out.push((relative(root, &path), io::digest_bytes(&bytes)));
            }
            log::debug!("scene {}: rendered", scene.scene_id);
            Ok(out)
        })
        .collect::<Result<_, DatasetError>>()?;
    Ok(entries.into_iter().flatten().collect())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), DatasetError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(DatasetError::io(dir))?;
    }
    std::fs::write(path, bytes).map_err(DatasetError::io(path))
}

fn relative(root: &Path, path: &Path) -> String {
    path.strip_prefix(root)
        .unwrap_or(path)
        .to_string_lossy()
        .replace('\\', "/")
}

fn by_split<T: Clone>(items: &[T], split_of: impl Fn(&T) -> Split) -> BTreeMap<Split, Vec<T>> {
    let mut m: BTreeMap<Split, Vec<T>> = Split::ALL.iter().map(|s| (*s, Vec::new())).collect();
    for x in items {
        m.get_mut(&split_of(x)).expect("all splits present").push(x.clone());
    }
    m
}

/// Runs the whole pipeline on `jobs` worker threads and writes the dataset
/// under `config.output_dir`. The output does not depend on `jobs`.
pub fn generate_dataset(config: &DatasetConfig, jobs: usize) -> Result<GeneratedDataset, DatasetError> {
    config.validate()?;
    with_workers(jobs, || run(config))?
}

/// Runs `f` on a dedicated pool of `jobs` threads.
pub fn with_workers<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, DatasetError> {
    if jobs == 0 {
        return Err(DatasetError::Config("jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| DatasetError::Config(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(f))
}

fn run(config: &DatasetConfig) -> Result<GeneratedDataset, DatasetError> {
    let root = config.output_dir.as_path();
    let bank = build_bank(&config.bank)?;
    log::info!("bank: {} sounds from {}", bank.len(), bank.source_descriptor());
    let templates = load_template_set(config.template_dir.as_deref())?;
    let splits = split_scenes(config.n_scenes, &config.split_ratios, config.master_seed)?;
    let compose = ComposeConfig {
        with_replacement: config.with_replacement,
    };
    let scenes = compose_scenes(&bank, &splits, config.master_seed, compose)?;
    let questions = generate_questions(
        &scenes,
        &templates,
        config.master_seed,
        config.questions_per_scene,
        config.budget,
    )?;
    let canvas_ms = config.canvas_ms.unwrap_or_else(|| render::canvas_for(&scenes));

    let mut files = BTreeMap::new();
    let bank_dir = root.join("bank");
    bank::write_bank(&bank, &bank_dir)?;
    for entry in std::fs::read_dir(&bank_dir).map_err(DatasetError::io(&bank_dir))? {
        let path = entry.map_err(DatasetError::io(&bank_dir))?.path();
        let bytes = std::fs::read(&path).map_err(DatasetError::io(&path))?;
        files.insert(relative(root, &path), io::digest_bytes(&bytes));
    }

    let scene_split: BTreeMap<u64, Split> = scenes.iter().map(|s| (s.scene_id, s.split)).collect();
    let scenes_by = by_split(&scenes, |s| s.split);
    let questions_by = by_split(&questions, |q| scene_split[&q.scene_id]);
    let mut counts = BTreeMap::new();
    for split in Split::ALL {
        let (s, q) = (&scenes_by[&split], &questions_by[&split]);
        let d = io::write_scenes(root, split, config.master_seed, s)?;
        files.insert(relative(root, &io::scenes_path(root, split)), d);
        let d = io::write_questions(root, split, config.master_seed, q)?;
        files.insert(relative(root, &io::questions_path(root, split)), d);
        counts.insert(
            split.as_str().to_string(),
            SplitCounts {
                scenes: s.len(),
                questions: q.len(),
            },
        );
    }
    if config.render_audio {
        files.extend(render_audio(&scenes, &bank, canvas_ms, root, config.spectrograms)?);
    }
    let manifest = DatasetManifest {
        config: config.echo(),
        bank: bank.source_descriptor().to_string(),
        canvas_ms,
        counts,
        files,
    };
    io::write_manifest(root, &manifest)?;
    log::info!(
        "wrote {} scenes and {} questions to {}",
        scenes.len(),
        questions.len(),
        root.display()
    );
    Ok(GeneratedDataset {
        manifest,
        scenes,
        questions,
    })
}
