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

//! Flat configuration file and its merge with command-line flags.

use std::path::{Path, PathBuf};

use aqagen_core::dataset::{BankSource, DatasetConfig, SplitRatios};
use serde::{Deserialize, Serialize};

/// Environment variable holding the default output directory.
pub const OUT_DIR_ENV: &str = "AQAGEN_OUT_DIR";

/// Every key is optional; unset keys take the library defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Number of scenes.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenes: Option<usize>,
    /// Master seed.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub questions_min: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub questions_max: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub val: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test: Option<f64>,
    /// Fixed scene length; by default the longest scene decides.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canvas_ms: Option<f64>,
    /// Directory of recordings to ingest instead of the synthetic bank.
    #[arg(long, conflicts_with = "synthetic_bank")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bank_dir: Option<PathBuf>,
    /// Use the built-in synthetic bank (the default without --bank-dir).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synthetic_bank: Option<bool>,
    /// Seed of the synthetic bank.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bank_seed: Option<u64>,
    /// Resample recordings that are not at 48 kHz.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resample: Option<bool>,
    /// Template directory; the shipped set by default.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub templates: Option<PathBuf>,
    /// Output (and input) dataset directory.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub with_replacement: Option<bool>,
    /// Binding attempts per template and question.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub render_audio: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrograms: Option<bool>,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        Settings { $($f: $top.$f.clone().or_else(|| $base.$f.clone())),* }
    };
}

impl Settings {
    pub fn from_toml(path: &Path) -> Result<Settings, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Values of `self` win over those of `base`.
    pub fn over(&self, base: &Settings) -> Settings {
        let top = self;
        overlay!(base, top; scenes, seed, questions_min, questions_max, train, val, test, canvas_ms,
            bank_dir, synthetic_bank, bank_seed, resample, templates, out, with_replacement, budget,
            render_audio, spectrograms, jobs)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| DatasetConfig::default().output_dir)
    }

    pub fn jobs(&self) -> usize {
        self.jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn to_dataset_config(&self) -> Result<DatasetConfig, String> {
        let d = DatasetConfig::default();
        let r = SplitRatios::default();
        if self.synthetic_bank == Some(true) && self.bank_dir.is_some() {
            return Err("synthetic_bank and bank_dir are mutually exclusive".into());
        }
        if self.jobs == Some(0) {
            return Err("jobs must be at least 1".into());
        }
        let bank = match &self.bank_dir {
            Some(path) => BankSource::Directory {
                path: path.clone(),
                resample: self.resample.unwrap_or(false),
            },
            None => BankSource::Synthetic {
                seed: self.bank_seed.unwrap_or(0),
            },
        };
        let c = DatasetConfig {
            n_scenes: self.scenes.unwrap_or(d.n_scenes),
            questions_per_scene: (
                self.questions_min.unwrap_or(d.questions_per_scene.0),
                self.questions_max.unwrap_or(d.questions_per_scene.1),
            ),
            split_ratios: SplitRatios {
                train: self.train.unwrap_or(r.train),
                val: self.val.unwrap_or(r.val),
                test: self.test.unwrap_or(r.test),
            },
            master_seed: self.seed.unwrap_or(d.master_seed),
            canvas_ms: self.canvas_ms.or(d.canvas_ms),
            bank,
            template_dir: self.templates.clone(),
            output_dir: self.out_dir(),
            with_replacement: self.with_replacement.unwrap_or(d.with_replacement),
            budget: self.budget.unwrap_or(d.budget),
            render_audio: self.render_audio.unwrap_or(d.render_audio),
            spectrograms: self.spectrograms.unwrap_or(d.spectrograms),
        };
        c.validate().map_err(|e| e.to_string())?;
        Ok(c)
    }

    /// Fully populated settings, as printed and stored next to the output.
    pub fn effective(&self) -> Result<Settings, String> {
        let c = self.to_dataset_config()?;
        let (bank_dir, bank_seed, resample) = match &c.bank {
            BankSource::Directory { path, resample } => (Some(path.clone()), None, Some(*resample)),
            BankSource::Synthetic { seed } => (None, Some(*seed), None),
        };
        Ok(Settings {
            scenes: Some(c.n_scenes),
            seed: Some(c.master_seed),
            questions_min: Some(c.questions_per_scene.0),
            questions_max: Some(c.questions_per_scene.1),
            train: Some(c.split_ratios.train),
            val: Some(c.split_ratios.val),
            test: Some(c.split_ratios.test),
            canvas_ms: c.canvas_ms,
            synthetic_bank: Some(bank_dir.is_none()),
            bank_dir,
            bank_seed,
            resample,
            templates: c.template_dir.clone(),
            out: Some(c.output_dir.clone()),
            with_replacement: Some(c.with_replacement),
            budget: Some(c.budget),
            render_audio: Some(c.render_audio),
            spectrograms: Some(c.spectrograms),
            jobs: Some(self.jobs()),
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("settings serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let file: Settings = toml::from_str("scenes = 10\nseed = 3\n").unwrap();
        let flags = Settings {
            seed: Some(9),
            ..Default::default()
        };
        let m = flags.over(&file);
        assert_eq!((m.scenes, m.seed), (Some(10), Some(9)));
    }

    #[test]
    fn unknown_key_is_rejected() {
        assert!(toml::from_str::<Settings>("scene = 10\n").is_err());
    }

    #[test]
    fn effective_round_trips_through_toml() {
        let s = Settings {
            scenes: Some(4),
            out: Some("x".into()),
            jobs: Some(2),
            ..Default::default()
        };
        let e = s.effective().unwrap();
        let back: Settings = toml::from_str(&e.to_toml()).unwrap();
        assert_eq!(back, e);
        assert_eq!(back.to_dataset_config().unwrap(), s.to_dataset_config().unwrap());
    }
}
