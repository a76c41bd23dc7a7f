//! The `fgame` binary end to end: outputs, exit codes and diagnostics.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use forecast_game::ExperimentSummary;

const SMALL: &str = r#"
name = "small"
move_order = "machine_first"
rounds = 400
replications = 3
seed = 5
alpha = 0.3
detection_window = 50
assurance_window = 200

[nature]
kind = "iid"
p = 0.3

[forecaster]
kind = "constant"
alpha = 0.3

[output]
emit_traces = true
"#;

fn fgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgame"))
        .args(args)
        .output()
        .unwrap()
}

fn write_scenario(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("scenario.toml");
    fs::write(&path, text).unwrap();
    path
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn run_writes_the_output_layout() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), SMALL);
    let out_dir = dir.path().join("out");
    let out = fgame(&[
        "run",
        "--scenario",
        scenario.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for rel in [
        "summary.json",
        "traces/rep_0.csv",
        "traces/rep_2.csv",
        "series/alpha_0.3.csv",
    ] {
        assert!(out_dir.join(rel).is_file(), "missing {rel}");
    }
    let summary: ExperimentSummary =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(
        (summary.rounds, summary.replications, summary.master_seed),
        (400, 3, 5)
    );
    let trace = fs::read_to_string(out_dir.join("traces/rep_0.csv")).unwrap();
    assert!(trace.starts_with("t,forecast,true_prob,outcome,selected,move_order\n0,0.3,0.3,"));
    assert_eq!(trace.lines().count(), 401);
}

#[test]
fn overrides_and_no_traces() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), SMALL);
    let out_dir = dir.path().join("out");
    let out = fgame(&[
        "run",
        "--scenario",
        scenario.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--seed",
        "77",
        "--rounds",
        "300",
        "--replications",
        "2",
        "--no-traces",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(!out_dir.join("traces").exists());
    let summary: ExperimentSummary =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(
        (summary.rounds, summary.replications, summary.master_seed),
        (300, 2, 77)
    );
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), &SMALL.replace("rounds = 400", "rounds = = 400"));
    let out = fgame(&["run", "--scenario", scenario.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("scenario.toml:4:10:"),
        "{}",
        stderr(&out)
    );

    let scenario = write_scenario(dir.path(), &SMALL.replace("seed = 5", "seed = 5\nsede = 6"));
    let out = fgame(&["run", "--scenario", scenario.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("sede"), "{}", stderr(&out));
}

#[test]
fn contract_violations_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [
        SMALL
            .replace("kind = \"iid\"\np = 0.3", "kind = \"oakes_adversary\"")
            .replace("machine_first", "simultaneous"),
        SMALL.replace("kind = \"constant\"\nalpha = 0.3", "kind = \"mimic\""),
        SMALL.replace("p = 0.3", "p = 0.35"),
        SMALL.replace("detection_window = 50", "detection_window = 500"),
    ] {
        let scenario = write_scenario(dir.path(), &bad);
        let out_dir = dir.path().join("unused");
        let out = fgame(&[
            "run",
            "--scenario",
            scenario.to_str().unwrap(),
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 3, "{}", stderr(&out));
    }
}

#[test]
fn missing_file_exits_1() {
    let out = fgame(&["run", "--scenario", "/definitely/not/here.toml"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn sweep_then_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let perverse = SMALL
        .replace("kind = \"iid\"\np = 0.3", "kind = \"uniformly_perverse\"")
        .replace("emit_traces = true", "emit_traces = false");
    let scenario = write_scenario(dir.path(), &perverse);
    let out_dir = dir.path().join("sweep");
    let out = fgame(&[
        "sweep",
        "--scenario",
        scenario.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--alphas",
        "0.1, 0.3,0.9",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(
        lines.next(),
        Some("alpha,deviations,last_deviation,p_final,abs_dev")
    );
    let alphas: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(alphas, ["0.1", "0.3", "0.9"]);
    assert!(out_dir.join("alpha_0.9/summary.json").is_file());

    let out = fgame(&["verdict", "--dir", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    let written = fs::read_to_string(out_dir.join("verdict.json")).unwrap();
    assert!(written.contains("UniformPerversity"));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), written.trim());

    let out = fgame(&[
        "sweep",
        "--scenario",
        scenario.to_str().unwrap(),
        "--alphas",
        "0.33",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verdict_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), SMALL);
    let out_dir = dir.path().join("iid");
    assert_eq!(
        code(&fgame(&[
            "run",
            "--scenario",
            scenario.to_str().unwrap(),
            "--out-dir",
            out_dir.to_str().unwrap()
        ])),
        0
    );
    let out = fgame(&["verdict", "--dir", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"learned_value\": 0.3"));

    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    assert_ne!(
        code(&fgame(&["verdict", "--dir", empty.to_str().unwrap()])),
        0
    );

    fs::write(out_dir.join("summary.json"), "{\"grid\": 11}").unwrap();
    assert_eq!(
        code(&fgame(&["verdict", "--dir", out_dir.to_str().unwrap()])),
        2
    );
}

#[test]
fn seed_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), SMALL);
    let out = fgame(&["seed-check", "--scenario", scenario.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).contains("identical"));
}

#[test]
fn bundled_scenarios_parse_and_round_trip() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut count = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let file = forecast_game_cli::ScenarioFile::load(&path).unwrap();
        assert_eq!(
            Some(file.name.as_str()),
            path.file_stem().and_then(|s| s.to_str())
        );
        let config = file.to_config().unwrap();
        let again =
            forecast_game_cli::ScenarioFile::from_config(&file.name, &config, file.output.clone());
        assert_eq!(again, file);
        count += 1;
    }
    assert_eq!(count, 10);
}
