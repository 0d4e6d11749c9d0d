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

use std::path::Path;
use std::process::{Command, Output};

fn aqagen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqagen"))
        .args(args)
        .env_remove("AQAGEN_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generate(out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "generate",
        "--scenes",
        "12",
        "--seed",
        "7",
        "--synthetic-bank",
        "-q",
        "--out",
    ];
    args.push(out.to_str().unwrap());
    args.extend_from_slice(extra);
    aqagen(&args)
}

#[test]
fn generate_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = generate(dir.path(), &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "manifest.json",
        "config.toml",
        "stats/summary.txt",
        "questions/CLEAR_test_questions.json",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert!(dir.path().join("audio/train").read_dir().unwrap().count() > 0);
    let v = aqagen(&["verify", "-q", "--out", dir.path().to_str().unwrap()]);
    assert!(v.status.success());
    assert!(stdout(&v).lines().any(|l| l == "0 mismatches"), "{}", stdout(&v));
}

#[test]
fn zero_scenes_is_a_usage_error() {
    let o = aqagen(&["generate", "--scenes", "0", "-q"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_flags_and_config_are_usage_errors() {
    assert_eq!(aqagen(&["generate", "--scenes", "many"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "scenez = 3\n").unwrap();
    let o = aqagen(&["generate", "-q", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn missing_dataset_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = aqagen(&["verify", "-q", "--out", dir.path().join("nothing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn one_corrupted_answer_is_one_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate(dir.path(), &["--render-audio", "false"]).status.success());
    let path = dir.path().join("questions/CLEAR_train_questions.json");
    let mut doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let q = &mut doc["questions"][0];
    let id = q["question_id"].as_u64().unwrap();
    let family = q["family"].as_str().unwrap().to_string();
    let current = q["answer"].as_str().unwrap().to_string();
    let replacement = match (family.as_str(), current.as_str()) {
        ("yes_no", "yes") => "no",
        ("yes_no", _) => "yes",
        (_, "quiet") => "loud",
        _ => "quiet",
    };
    q["answer"] = replacement.into();
    std::fs::write(&path, serde_json::to_vec(&doc).unwrap()).unwrap();
    let v = aqagen(&["verify", "-q", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(2));
    let text = stdout(&v);
    assert!(text.lines().any(|l| l == "1 mismatches"), "{text}");
    assert!(text.contains(&format!("question_id={id} ")), "{text}");
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    let out = dir.path().join("d");
    std::fs::write(
        &cfg,
        format!(
            "scenes = 9\nseed = 1\nrender_audio = false\nout = {:?}\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = aqagen(&["generate", "-q", "--config", cfg.to_str().unwrap(), "--scenes", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stored = std::fs::read_to_string(out.join("config.toml")).unwrap();
    assert!(stored.contains("scenes = 5"), "{stored}");
    assert!(stored.contains("seed = 1"), "{stored}");
    assert!(!out.join("audio").exists());
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("env_out");
    let o = Command::new(env!("CARGO_BIN_EXE_aqagen"))
        .args(["gen-scenes", "--scenes", "3", "-q"])
        .env("AQAGEN_OUT_DIR", &out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("scenes/CLEAR_train_scenes.json").exists());
}

#[test]
fn staged_commands_match_generate() {
    let dir = tempfile::tempdir().unwrap();
    let whole = dir.path().join("whole");
    let staged = dir.path().join("staged");
    assert!(generate(&whole, &[]).status.success());
    let s = staged.to_str().unwrap();
    for cmd in ["gen-scenes", "gen-questions", "render"] {
        let o = aqagen(&[cmd, "--scenes", "12", "--seed", "7", "-q", "--out", s]);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["questions/CLEAR_val_questions.json", "scenes/CLEAR_test_scenes.json"] {
        assert_eq!(
            std::fs::read(whole.join(f)).unwrap(),
            std::fs::read(staged.join(f)).unwrap(),
            "{f}"
        );
    }
    let wav = whole
        .join("audio/train")
        .read_dir()
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let name = wav.file_name().unwrap();
    assert_eq!(
        std::fs::read(&wav).unwrap(),
        std::fs::read(staged.join("audio/train").join(name)).unwrap()
    );
}

#[test]
fn json_log_lines() {
    let dir = tempfile::tempdir().unwrap();
    let o = aqagen(&["gen-bank", "--log-json", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    let line = err.lines().next().expect("some log output");
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    assert_eq!(v["level"], "INFO");
}
