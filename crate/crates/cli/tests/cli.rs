use std::path::Path;
use std::process::{Command, Output};

use attnplan_cli::Manifest;

fn attnplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_attnplan")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = attnplan(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, name)).unwrap()
}

fn csv_rows(dir: &Path, name: &str) -> Vec<Vec<String>> {
    read(dir, name)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn solve_writes_values_policy_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let stdout = ok(&["solve", "--config", "mini-3x3", "--T", "2", "--out", out]);
    assert!(stdout.contains("G(x0) = "));
    let values = json(dir.path(), "values.json");
    assert_eq!(values["T"], 2);
    let states = values["states"].as_array().unwrap();
    let policy = json(dir.path(), "policy.json");
    assert_eq!(policy["states"].as_array().unwrap().len(), states.len());
    for s in states {
        let t = s["duration"].as_u64().unwrap();
        assert!((1..=2).contains(&t));
    }
    let m = Manifest::from_json(&read(dir.path(), "manifest.json")).unwrap();
    assert_eq!(m.command, "solve");
    assert_eq!(m.outputs, vec!["values.json", "policy.json"]);
    assert!(!dir.path().join(".values.json.tmp").exists());
}

#[test]
fn goal_weight_of_one_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = attnplan(&["solve", "--config", "mini-3x3", "--w1", "1.0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("values.json").exists());
}

#[test]
fn bad_arguments_exit_with_one() {
    assert_eq!(attnplan(&["solve", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(attnplan(&["solve", "--config", "no-such-world"]).status.code(), Some(1));
    assert_eq!(attnplan(&["solve", "--config", "mini-3x3", "--T", "0"]).status.code(), Some(1));
}

#[test]
fn zero_costs_give_the_same_value_for_every_bound() {
    let one = tempfile::tempdir().unwrap();
    let four = tempfile::tempdir().unwrap();
    for (dir, t) in [(&one, "1"), (&four, "4")] {
        ok(&["solve", "--config", "mini-3x3", "--costs-zero", "--T", t, "--out", dir.path().to_str().unwrap()]);
    }
    let v = |d: &Path| json(d, "values.json")["initial"]["v"].as_f64().unwrap();
    assert!((v(one.path()) - v(four.path())).abs() <= 1e-5);
}

#[test]
fn sweep_writes_one_row_per_bound() {
    for (t, rows) in [("1", 1), ("3", 3)] {
        let dir = tempfile::tempdir().unwrap();
        let stdout = ok(&["sweep-t", "--config", "mini-3x3", "--T", t, "--out", dir.path().to_str().unwrap()]);
        assert!(stdout.contains("sustain bound"));
        let header = read(dir.path(), "sweep_T.csv");
        assert!(header.starts_with("T,G0,I0,V0,max_t_used\n"));
        let rows_read = csv_rows(dir.path(), "sweep_T.csv");
        assert_eq!(rows_read.len(), rows);
        for (i, row) in rows_read.iter().enumerate() {
            assert_eq!(row[0], (i + 1).to_string());
        }
    }
}

#[test]
fn pareto_writes_one_row_per_weight() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["pareto", "--config", "mini-3x3", "--T", "2", "--out", dir.path().to_str().unwrap()]);
    let rows = csv_rows(dir.path(), "pareto.csv");
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), 0.9);
    assert_eq!(rows[8][0].parse::<f64>().unwrap(), 0.1);
}

#[test]
fn simulate_is_repeatable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        ok(&[
            "simulate", "--config", "mini-3x3", "--T", "3", "--n", "300", "--horizon", "60", "--seed", "9", "--out",
            dir.path().to_str().unwrap(),
        ]);
    }
    for name in ["timeline.csv", "trajectory.jsonl", "returns.json"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
    assert_eq!(csv_rows(a.path(), "timeline.csv").len(), 60);
    assert_eq!(read(a.path(), "trajectory.jsonl").lines().count(), 60);
    let returns = json(a.path(), "returns.json");
    assert_eq!(returns["rollouts"], 300);
}

#[test]
fn replay_reproduces_the_outputs_byte_for_byte() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    ok(&[
        "simulate", "--config", "corridor", "--T", "2", "--n", "200", "--horizon", "30", "--seed", "4", "--out",
        first.path().to_str().unwrap(),
    ]);
    let manifest = first.path().join("manifest.json");
    ok(&["replay", manifest.to_str().unwrap(), "--out", second.path().to_str().unwrap()]);
    for name in ["timeline.csv", "trajectory.jsonl", "returns.json"] {
        assert_eq!(
            std::fs::read(first.path().join(name)).unwrap(),
            std::fs::read(second.path().join(name)).unwrap(),
            "{name}"
        );
    }
    let a = Manifest::from_json(&read(first.path(), "manifest.json")).unwrap();
    let b = Manifest::from_json(&read(second.path(), "manifest.json")).unwrap();
    assert_eq!(a.params, b.params);
}

#[test]
fn config_files_are_read_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("world.toml");
    std::fs::write(&cfg, attnplan::pursuit::bundled_config("corridor").unwrap()).unwrap();
    let out = dir.path().join("out");
    ok(&["solve", "--config", cfg.to_str().unwrap(), "--T", "1", "--out", out.to_str().unwrap()]);
    let m = Manifest::from_json(&read(&out, "manifest.json")).unwrap();
    assert_eq!(m.params.config.name, cfg.to_str().unwrap());
}

#[test]
fn oversized_worlds_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let text = attnplan::pursuit::bundled_config("paper-world").unwrap();
    let capped = format!("state_cap = 10\n{text}");
    let cfg = dir.path().join("big.toml");
    std::fs::write(&cfg, capped).unwrap();
    let out = attnplan(&["solve", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn malformed_manifests_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("manifest.json");
    std::fs::write(&path, "{\"command\": \"solve\"}").unwrap();
    let out = attnplan(&["replay", path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fuzz_manifest_seeds_round_trip() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/parse_manifest");
    let mut seen = 0;
    for entry in std::fs::read_dir(root).unwrap() {
        let m = Manifest::from_json(&std::fs::read_to_string(entry.unwrap().path()).unwrap()).unwrap();
        assert_eq!(Manifest::from_json(&m.to_json()).unwrap(), m);
        seen += 1;
    }
    assert_eq!(seen, 3);
}
