//! End-to-end checks of the command-line interface: subcommands, exit codes,
//! and the run -> report round trip.

mod common;

use std::fs;
use std::process::Command;

use common::write_grid_dataset;

fn lifetune() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lifetune"))
}

#[test]
fn validate_dataset_reports_row_counts() {
    let dir = tempfile::tempdir().unwrap();
    let (descriptor, data) = write_grid_dataset(dir.path(), &["w1", "w2"], 6, 6, 1);
    let output = lifetune()
        .args(["validate-dataset", "--descriptor"])
        .arg(&descriptor)
        .arg("--data")
        .arg(&data)
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("rows: 72"), "{stdout}");
    assert!(stdout.contains("w1: 36"), "{stdout}");
}

#[test]
fn dataset_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let (descriptor, data) = write_grid_dataset(dir.path(), &["w1"], 4, 4, 1);
    // corrupt one row's value so it falls outside the declared domain
    let broken = fs::read_to_string(&data)
        .unwrap()
        .replacen("3,3,w1", "9,3,w1", 1);
    fs::write(&data, broken).unwrap();
    let output = lifetune()
        .args(["validate-dataset", "--descriptor"])
        .arg(&descriptor)
        .arg("--data")
        .arg(&data)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("not in the domain"), "{stderr}");
}

#[test]
fn usage_errors_exit_with_code_one() {
    let output = lifetune().arg("run").arg("/no/such/config.json").output().unwrap();
    assert_eq!(output.status.code(), Some(1));

    let output = lifetune().arg("definitely-not-a-subcommand").output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn run_then_report_produces_tables() {
    let dir = tempfile::tempdir().unwrap();
    let (descriptor, data) = write_grid_dataset(dir.path(), &["w1", "w2", "w3"], 10, 10, 5);
    let out_dir = dir.path().join("records");
    let config_path = dir.path().join("experiment.json");
    fs::write(
        &config_path,
        format!(
            r#"{{
  "dataset": {{ "descriptor": {descriptor:?}, "data": {data:?} }},
  "strategies": ["dlisa", "femosaa"],
  "runs": 2,
  "params": {{ "budget": 30, "master_seed": 9 }},
  "output_dir": {out:?}
}}"#,
            descriptor = descriptor.display().to_string(),
            data = data.display().to_string(),
            out = out_dir.display().to_string(),
        ),
    )
    .unwrap();

    let output = lifetune().arg("run").arg(&config_path).output().unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert_eq!(fs::read_dir(&out_dir).unwrap().count(), 4);

    let output = lifetune()
        .args(["report", "--rq1", "--rq2", "--rq3"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    for table in ["rq1.csv", "rq1.md", "rq2.csv", "rq2.md", "rq3.csv", "rq3.md"] {
        assert!(out_dir.join(table).exists(), "{table} missing");
    }
    let rq1 = fs::read_to_string(out_dir.join("rq1.md")).unwrap();
    assert!(rq1.contains("Rank-1 counts"), "{rq1}");
}

#[test]
fn sweep_alpha_writes_one_row_per_alpha_and_case() {
    let dir = tempfile::tempdir().unwrap();
    let (descriptor, data) = write_grid_dataset(dir.path(), &["w1", "w2"], 8, 8, 3);
    let out_dir = dir.path().join("sweep");
    let config_path = dir.path().join("experiment.json");
    fs::write(
        &config_path,
        format!(
            r#"{{
  "dataset": {{ "descriptor": {descriptor:?}, "data": {data:?} }},
  "strategies": ["dlisa"],
  "runs": 2,
  "params": {{ "budget": 20, "master_seed": 4 }},
  "output_dir": {out:?}
}}"#,
            descriptor = descriptor.display().to_string(),
            data = data.display().to_string(),
            out = out_dir.display().to_string(),
        ),
    )
    .unwrap();
    let output = lifetune()
        .args(["sweep-alpha"])
        .arg(&config_path)
        .args(["--values", "0.1,0.5"])
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let csv = fs::read_to_string(out_dir.join("sweep_alpha.csv")).unwrap();
    // header + 2 alphas x 2 workloads
    assert_eq!(csv.lines().count(), 5, "{csv}");
}

#[test]
fn output_dir_env_is_honored_when_config_omits_it() {
    let dir = tempfile::tempdir().unwrap();
    let (descriptor, data) = write_grid_dataset(dir.path(), &["w1"], 6, 6, 2);
    let out_dir = dir.path().join("from-env");
    let config_path = dir.path().join("experiment.json");
    fs::write(
        &config_path,
        format!(
            r#"{{
  "dataset": {{ "descriptor": {descriptor:?}, "data": {data:?} }},
  "strategies": ["femosaa"],
  "runs": 1,
  "params": {{ "budget": 10, "master_seed": 1 }}
}}"#,
            descriptor = descriptor.display().to_string(),
            data = data.display().to_string(),
        ),
    )
    .unwrap();
    let output = lifetune()
        .env("LIFETUNE_OUT_DIR", &out_dir)
        .arg("run")
        .arg(&config_path)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert_eq!(fs::read_dir(&out_dir).unwrap().count(), 1);
}

#[test]
fn unknown_strategy_names_are_rejected_at_load() {
    let dir = tempfile::tempdir().unwrap();
    let (descriptor, data) = write_grid_dataset(dir.path(), &["w1"], 4, 4, 2);
    let config_path = dir.path().join("experiment.json");
    fs::write(
        &config_path,
        format!(
            r#"{{
  "dataset": {{ "descriptor": {descriptor:?}, "data": {data:?} }},
  "strategies": ["warp_drive"],
  "runs": 1
}}"#,
            descriptor = descriptor.display().to_string(),
            data = data.display().to_string(),
        ),
    )
    .unwrap();
    let output = lifetune().arg("run").arg(&config_path).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("warp_drive") || stderr.contains("unknown variant"), "{stderr}");
}

#[test]
fn glob_data_paths_load_like_concatenated_files() {
    let dir = tempfile::tempdir().unwrap();
    let (descriptor, data) = write_grid_dataset(dir.path(), &["w1", "w2"], 6, 6, 7);
    // split the single CSV into per-workload files
    let text = fs::read_to_string(&data).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    let (mut w1_rows, mut w2_rows) = (vec![header.to_string()], vec![header.to_string()]);
    for line in lines {
        if line.contains(",w1,") {
            w1_rows.push(line.to_string());
        } else {
            w2_rows.push(line.to_string());
        }
    }
    fs::write(dir.path().join("split-w1.csv"), w1_rows.join("\n")).unwrap();
    fs::write(dir.path().join("split-w2.csv"), w2_rows.join("\n")).unwrap();
    fs::remove_file(&data).unwrap();

    let pattern = dir.path().join("split-*.csv");
    let output = lifetune()
        .args(["validate-dataset", "--descriptor"])
        .arg(&descriptor)
        .arg("--data")
        .arg(&pattern)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("rows: 72"), "{stdout}");
}
