//! End-to-end checks of the `gcnlab` binary: exit codes, file outputs,
//! and byte stability across identical invocations.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gcnlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcnlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn synth_dataset(dir: &Path, nodes: usize, seed: u64) -> PathBuf {
    let data = dir.join("data");
    let out = gcnlab(&[
        "synth",
        "--out",
        data.to_str().unwrap(),
        "--nodes",
        &nodes.to_string(),
        "--classes",
        "2",
        "--p-in",
        "0.3",
        "--p-out",
        "0.02",
        "--features",
        "8",
        "--signal",
        "1.5",
        "--seed",
        &seed.to_string(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    data
}

#[test]
fn synth_then_fixed_writes_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let data = synth_dataset(tmp.path(), 60, 3);
    let csv_path = tmp.path().join("fixed.csv");

    let out = gcnlab(&[
        "fixed",
        "--data",
        data.to_str().unwrap(),
        "--policy",
        "ecm",
        "--rate",
        "0.2",
        "--seed-list",
        "1,2",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.trim_end().lines().collect();
    assert_eq!(
        lines[0],
        "dataset,policy,rate,seed,accuracy,loss,stop_best,stop_halt,status"
    );
    assert_eq!(lines.len(), 4, "2 seed rows + mean row + header");
    assert!(lines[3].contains(",mean,"));
    for line in &lines[1..] {
        assert!(line.ends_with(",ok"), "{line}");
    }
}

#[test]
fn fixed_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let data = synth_dataset(tmp.path(), 50, 5);
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = tmp.path().join(name);
        let out = gcnlab(&[
            "fixed",
            "--data",
            data.to_str().unwrap(),
            "--policy",
            "mc",
            "--rate",
            "0.2",
            "--seed-list",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        outputs.push(std::fs::read(path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn sweep_writes_csv_and_svg_with_expected_cardinality() {
    let tmp = tempfile::tempdir().unwrap();
    let data = synth_dataset(tmp.path(), 60, 9);
    let csv_path = tmp.path().join("sweep.csv");
    let svg_path = tmp.path().join("sweep.svg");

    let out = gcnlab(&[
        "sweep",
        "--data",
        data.to_str().unwrap(),
        "--policy",
        "mc",
        "--policy",
        "lc",
        "--rates",
        "0.1:0.3:0.1",
        "--seed-list",
        "1,2",
        "--jobs",
        "2",
        "--out",
        csv_path.to_str().unwrap(),
        "--svg",
        svg_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let data_rows = csv
        .lines()
        .skip(1)
        .filter(|l| !l.contains(",mean,"))
        .count();
    assert_eq!(data_rows, 2 * 3 * 2, "policies x rates x seeds");
    let mean_rows = csv.lines().filter(|l| l.contains(",mean,")).count();
    assert_eq!(mean_rows, 2 * 3);

    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches(">mc</text>").count(), 1);
    assert_eq!(svg.matches(">lc</text>").count(), 1);
}

#[test]
fn single_cell_sweep_has_one_data_row() {
    let tmp = tempfile::tempdir().unwrap();
    let data = synth_dataset(tmp.path(), 40, 2);
    let csv_path = tmp.path().join("one.csv");
    let out = gcnlab(&[
        "sweep",
        "--data",
        data.to_str().unwrap(),
        "--policy",
        "df",
        "--rates",
        "0.2:0.2:0.1",
        "--seed-list",
        "1",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.trim_end().lines().collect();
    assert_eq!(lines.len(), 3, "header + 1 data row + mean");
}

#[test]
fn spectrum_on_toy_graph() {
    let tmp = tempfile::tempdir().unwrap();
    // single-edge dataset written by hand
    let data = tmp.path().join("edgepair");
    std::fs::create_dir_all(&data).unwrap();
    std::fs::write(data.join("nodes.tsv"), "0\ta\t1 0\n1\tb\t0 1\n").unwrap();
    std::fs::write(data.join("edges.tsv"), "0\t1\n").unwrap();

    let out = gcnlab(&["spectrum", "--data", data.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.trim_end().lines().collect();
    assert_eq!(lines[0], "dataset,min,median,avg,std,max");
    assert_eq!(lines[1], "edgepair,0,1,1,1,2");
}

#[test]
fn centrality_dumps_scores() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("star");
    std::fs::create_dir_all(&data).unwrap();
    std::fs::write(
        data.join("nodes.tsv"),
        "0\thub\t1\n1\tleaf\t0\n2\tleaf\t0\n3\tleaf\t0\n",
    )
    .unwrap();
    std::fs::write(data.join("edges.tsv"), "0\t1\n0\t2\n0\t3\n").unwrap();

    let out = gcnlab(&["centrality", "--data", data.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.trim_end().lines().collect();
    assert_eq!(lines[0], "node,score");
    assert_eq!(lines[1], "0,1");
    assert_eq!(lines[2], "1,0.666667");
}

#[test]
fn centrality_flags_change_scores() {
    let tmp = tempfile::tempdir().unwrap();
    // path 0-1-2-3 plus an isolated pair 4-5
    let data = tmp.path().join("twocomp");
    std::fs::create_dir_all(&data).unwrap();
    std::fs::write(
        data.join("nodes.tsv"),
        "0\ta\t1\n1\ta\t1\n2\tb\t1\n3\tb\t1\n4\ta\t1\n5\tb\t1\n",
    )
    .unwrap();
    std::fs::write(data.join("edges.tsv"), "0\t1\n1\t2\n2\t3\n4\t5\n").unwrap();

    let score_of_node4 = |extra: &[&str]| -> String {
        let mut args = vec!["centrality", "--data", data.to_str().unwrap()];
        args.extend_from_slice(extra);
        let out = gcnlab(&args);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .find(|l| l.starts_with("4,"))
            .unwrap()
            .to_string()
    };
    // global N: node 4 reaches one neighbor → 1/5
    assert_eq!(score_of_node4(&[]), "4,0.2");
    // component-local N: its component has 2 nodes → 1/1
    assert_eq!(score_of_node4(&["--component-local-n"]), "4,1");

    // radius 1 truncates node 0's sum from 1 + 1/2 + 1/3 to 1, over N-1 = 5
    let out = gcnlab(&[
        "centrality",
        "--data",
        data.to_str().unwrap(),
        "--max-radius",
        "1",
    ]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().any(|l| l == "0,0.2"), "{stdout}");
}

#[test]
fn stratified_selection_flag_accepted() {
    let tmp = tempfile::tempdir().unwrap();
    let data = synth_dataset(tmp.path(), 40, 4);
    let out = gcnlab(&[
        "fixed",
        "--data",
        data.to_str().unwrap(),
        "--policy",
        "mc",
        "--rate",
        "0.2",
        "--seed-list",
        "1",
        "--stratify",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().nth(1).unwrap().ends_with(",ok"));
}

#[test]
fn exit_code_usage_error() {
    let out = gcnlab(&[
        "fixed",
        "--data",
        "/nonexistent",
        "--policy",
        "bogus",
        "--rate",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let tmp = tempfile::tempdir().unwrap();
    let data = synth_dataset(tmp.path(), 30, 1);
    let out = gcnlab(&[
        "fixed",
        "--data",
        data.to_str().unwrap(),
        "--policy",
        "mc",
        "--rate",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_code_data_error() {
    let out = gcnlab(&[
        "fixed",
        "--data",
        "/nonexistent-dataset-dir",
        "--policy",
        "mc",
        "--rate",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_meta_mismatch_is_data_error() {
    let tmp = tempfile::tempdir().unwrap();
    let data = synth_dataset(tmp.path(), 30, 1);
    std::fs::write(data.join("meta.tsv"), "nodes\t31\n").unwrap();
    let out = gcnlab(&["centrality", "--data", data.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("nodes"), "{stderr}");
}

#[test]
fn spectrum_cap_requires_allow_large() {
    let tmp = tempfile::tempdir().unwrap();
    let data = synth_dataset(tmp.path(), 5001, 1);
    let out = gcnlab(&["spectrum", "--data", data.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("spectrum cap exceeded"), "{stderr}");
    assert!(stderr.contains("--allow-large"), "{stderr}");
}

#[test]
fn help_exits_zero() {
    let out = gcnlab(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    for sub in ["spectrum", "fixed", "sweep", "synth", "centrality"] {
        assert!(stdout.contains(sub), "missing subcommand {sub}");
    }
}
