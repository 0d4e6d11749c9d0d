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

//! `aqagen`: generate acoustic question answering datasets.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error
//! (including verification mismatches), 3 I/O error.

mod config;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aqagen_core::bank::{self, BankError};
use aqagen_core::dataset::{self, DatasetError};
use aqagen_core::render::{self, RenderError};
use aqagen_core::scene::{ComposeConfig, Split};
use aqagen_core::template::TemplateError;
use clap::{Parser, Subcommand};

use config::Settings;

#[derive(Parser, Debug)]
#[command(name = "aqagen", version, about = "Acoustic question answering dataset generator")]
struct Cli {
    /// Flat TOML file with the same keys as the long flags (dashes become underscores).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// One JSON object per log line.
    #[arg(long, global = true)]
    log_json: bool,
    /// Only warnings and errors.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the sound bank and write it to <out>/bank.
    GenBank(Settings),
    /// Compose scenes and write the scene files.
    GenScenes(Settings),
    /// Generate questions for the scenes already in <out>.
    GenQuestions(Settings),
    /// Render audio for the scenes already in <out>.
    Render(Settings),
    /// Run every stage and write the manifest and statistics.
    Generate(Settings),
    /// Recompute statistics of the dataset in <out>.
    Stats(Settings),
    /// Re-execute every stored program and compare with the stored answers.
    Verify(Settings),
}

enum Failure {
    Usage(String),
    Data(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Io(m) => m,
        }
    }
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Failure {
        let m = e.to_string();
        match e {
            DatasetError::Config(_) => Failure::Usage(m),
            DatasetError::Io { .. }
            | DatasetError::Bank(BankError::Io { .. })
            | DatasetError::Template(TemplateError::Io { .. })
            | DatasetError::Render(RenderError::Io { .. }) => Failure::Io(m),
            _ => Failure::Data(m),
        }
    }
}

impl From<BankError> for Failure {
    fn from(e: BankError) -> Failure {
        DatasetError::from(e).into()
    }
}

fn init_logging(json: bool, quiet: bool) {
    let level = if quiet {
        log::LevelFilter::Warn
    } else {
        log::LevelFilter::Info
    };
    let mut b = env_logger::Builder::new();
    b.filter_level(level).parse_default_env();
    if json {
        b.format(|buf, record| {
            let line = serde_json::json!({
                "level": record.level().as_str(),
                "target": record.target(),
                "message": record.args().to_string(),
            });
            writeln!(buf, "{line}")
        });
    }
    let _ = b.try_init();
}

fn settings(cli_config: Option<&Path>, flags: &Settings) -> Result<Settings, Failure> {
    let file = match cli_config {
        Some(p) => Settings::from_toml(p).map_err(Failure::Usage)?,
        None => Settings::default(),
    };
    flags.over(&file).effective().map_err(Failure::Usage)
}

fn store_effective(s: &Settings, out: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(out).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
    let path = out.join("config.toml");
    std::fs::write(&path, s.to_toml()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_all_scenes(root: &Path) -> Result<Vec<aqagen_core::SymbolicScene>, Failure> {
    let mut scenes = Vec::new();
    for split in Split::ALL {
        scenes.extend(dataset::read_scenes(root, split)?);
    }
    scenes.sort_by_key(|s| s.scene_id);
    Ok(scenes)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg_path = cli.config.as_deref();
    match &cli.command {
        Command::GenBank(flags) => {
            let s = settings(cfg_path, flags)?;
            let c = s.to_dataset_config().map_err(Failure::Usage)?;
            log::info!("effective config:\n{}", s.to_toml());
            let bank = dataset::build_bank(&c.bank)?;
            bank::write_bank(&bank, &c.output_dir.join("bank"))?;
            println!(
                "{} sounds written to {}",
                bank.len(),
                c.output_dir.join("bank").display()
            );
        }
        Command::GenScenes(flags) => {
            let s = settings(cfg_path, flags)?;
            let c = s.to_dataset_config().map_err(Failure::Usage)?;
            log::info!("effective config:\n{}", s.to_toml());
            store_effective(&s, &c.output_dir)?;
            let bank = dataset::build_bank(&c.bank)?;
            bank::write_bank(&bank, &c.output_dir.join("bank"))?;
            let splits = dataset::split_scenes(c.n_scenes, &c.split_ratios, c.master_seed)?;
            let compose = ComposeConfig {
                with_replacement: c.with_replacement,
            };
            let scenes = dataset::with_workers(s.jobs(), || {
                dataset::compose_scenes(&bank, &splits, c.master_seed, compose)
            })??;
            for split in Split::ALL {
                let part: Vec<_> = scenes.iter().filter(|x| x.split == split).cloned().collect();
                dataset::write_scenes(&c.output_dir, split, c.master_seed, &part)?;
            }
            println!("{} scenes written to {}", scenes.len(), c.output_dir.display());
        }
        Command::GenQuestions(flags) => {
            let s = settings(cfg_path, flags)?;
            let c = s.to_dataset_config().map_err(Failure::Usage)?;
            let scenes = read_all_scenes(&c.output_dir)?;
            let templates = dataset::load_template_set(c.template_dir.as_deref())?;
            let questions = dataset::with_workers(s.jobs(), || {
                dataset::generate_questions(&scenes, &templates, c.master_seed, c.questions_per_scene, c.budget)
            })??;
            let split_of: std::collections::BTreeMap<u64, Split> =
                scenes.iter().map(|x| (x.scene_id, x.split)).collect();
            for split in Split::ALL {
                let part: Vec<_> = questions
                    .iter()
                    .filter(|q| split_of[&q.scene_id] == split)
                    .cloned()
                    .collect();
                dataset::write_questions(&c.output_dir, split, c.master_seed, &part)?;
            }
            println!("{} questions written to {}", questions.len(), c.output_dir.display());
        }
        Command::Render(flags) => {
            let s = settings(cfg_path, flags)?;
            let c = s.to_dataset_config().map_err(Failure::Usage)?;
            let scenes = read_all_scenes(&c.output_dir)?;
            let bank = dataset::build_bank(&c.bank)?;
            let canvas = c.canvas_ms.unwrap_or_else(|| render::canvas_for(&scenes));
            let files = dataset::with_workers(s.jobs(), || {
                dataset::render_audio(&scenes, &bank, canvas, &c.output_dir, c.spectrograms)
            })??;
            println!("{} files rendered at {canvas} ms", files.len());
        }
        Command::Generate(flags) => {
            let s = settings(cfg_path, flags)?;
            let c = s.to_dataset_config().map_err(Failure::Usage)?;
            log::info!("effective config:\n{}", s.to_toml());
            store_effective(&s, &c.output_dir)?;
            let generated = dataset::generate_dataset(&c, s.jobs())?;
            let report = dataset::StatsReport::from_records(&generated.scenes, &generated.questions);
            dataset::write_stats(&report, &c.output_dir)?;
            print!("{}", report.summary());
            println!("manifest fingerprint {}", generated.manifest.fingerprint());
        }
        Command::Stats(flags) => {
            let s = settings(cfg_path, flags)?;
            let root = s.out_dir();
            let report = dataset::compute_stats(&root)?;
            dataset::write_stats(&report, &root)?;
            print!("{}", report.summary());
        }
        Command::Verify(flags) => {
            let s = settings(cfg_path, flags)?;
            let report = dataset::verify_dataset(&s.out_dir())?;
            for m in &report.mismatches {
                println!(
                    "mismatch question_id={} scene_id={} split={} stored={} recomputed={} ({})",
                    m.question_id,
                    m.scene_id,
                    m.split,
                    m.stored,
                    m.recomputed.as_deref().unwrap_or("-"),
                    m.reason
                );
            }
            for (scene, id) in &report.dangling_sounds {
                println!("scene {scene}: sound {id} is not in the bank");
            }
            println!("{} questions checked", report.questions);
            println!("{} mismatches", report.mismatches.len());
            if !report.is_clean() {
                return Err(Failure::Data("verification failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    init_logging(cli.log_json, cli.quiet);
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
