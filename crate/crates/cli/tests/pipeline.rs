use std::path::Path;
use std::process::Command;

use hypercone_cli::checkpoint::{self, FaceRecord, TypeRecord};
use hypercone_cli::driver::{classify, RunConfig, VerifyLevel};

fn config(n: usize, max_corank: usize, dir: &Path, threads: usize) -> RunConfig {
    let mut cfg = RunConfig::new(n, max_corank);
    cfg.checkpoint_dir = Some(dir.to_path_buf());
    cfg.threads = threads;
    cfg
}

fn snapshot(dir: &Path) -> (checkpoint::Manifest, Vec<Vec<FaceRecord>>, Vec<Vec<TypeRecord>>) {
    let manifest = checkpoint::read_manifest(dir).unwrap().unwrap();
    let faces = manifest.levels.iter().map(|l| checkpoint::read_faces(dir, l.corank).unwrap()).collect();
    let types = manifest.levels.iter().map(|l| checkpoint::read_types(dir, l.corank).unwrap()).collect();
    (manifest, faces, types)
}

#[test]
fn resumed_run_matches_fresh_run() {
    let fresh = tempfile::tempdir().unwrap();
    classify(&config(6, 2, fresh.path(), 1), |_| {}).unwrap();

    let resumed = tempfile::tempdir().unwrap();
    classify(&config(6, 1, resumed.path(), 1), |_| {}).unwrap();
    let mut logs = Vec::new();
    classify(&config(6, 2, resumed.path(), 1), |m| logs.push(m.to_string())).unwrap();
    assert!(logs.iter().any(|m| m.contains("resumed 2 completed level(s)")), "{logs:?}");

    assert_eq!(snapshot(fresh.path()), snapshot(resumed.path()));
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let one = tempfile::tempdir().unwrap();
    let three = tempfile::tempdir().unwrap();
    classify(&config(6, 2, one.path(), 1), |_| {}).unwrap();
    classify(&config(6, 2, three.path(), 3), |_| {}).unwrap();
    let a = snapshot(one.path());
    assert_eq!(a.0.levels.iter().map(|l| l.types).collect::<Vec<_>>(), vec![1, 9, 30]);
    assert_eq!(a, snapshot(three.path()));
}

#[test]
fn checkpoint_of_another_cone_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    classify(&config(2, 2, dir.path(), 1), |_| {}).unwrap();
    assert!(classify(&config(3, 2, dir.path(), 1), |_| {}).is_err());
}

#[test]
fn low_dimension_run_has_full_verification_clean() {
    let mut cfg = RunConfig::new(3, 5);
    cfg.verify = VerifyLevel::Full;
    let run = classify(&cfg, |_| {}).unwrap();
    assert_eq!(run.heredity_violations, 0);
    assert_eq!(run.type_counts(), vec![(6, 1), (5, 1), (4, 2), (3, 1), (2, 0)]);
}

fn hypercone(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hypercone")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn facets_command_exit_codes() {
    let (code, text) = hypercone(&["facets", "-n", "2"]);
    assert_eq!(code, 0, "{text}");
    let (code, text) = hypercone(&["facets", "-n", "6", "--corrupt"]);
    assert_eq!(code, 1);
    assert!(text.contains("NOT A FACET"), "{text}");
}

#[test]
fn annulator_command_on_distance_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cube.txt");
    // unit square: d(0,1) = d(0,2) = 1, d(1,2) = 2
    std::fs::write(&path, "1 1 2\n").unwrap();
    let (code, text) = hypercone(&["annulator", "--dist", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("vertices: 4"), "{text}");
    assert!(text.contains("rank: 2"), "{text}");

    // a cut: points 0 and 2 coincide
    std::fs::write(&path, "1 0 1\n").unwrap();
    let (code, text) = hypercone(&["annulator", "--dist", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{text}");
    assert!(text.contains("degenerate"), "{text}");

    // three collinear points violate the triangle inequality on squared distances
    std::fs::write(&path, "1 1 4\n").unwrap();
    assert_eq!(hypercone(&["annulator", "--dist", path.to_str().unwrap()]).0, 2);
}

#[test]
fn report_command_reads_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, text) = hypercone(&["classify", "-n", "2", "--max-corank", "2", "--checkpoint", d]);
    assert_eq!(code, 0, "{text}");
    let (code, text) = hypercone(&["report", d]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("heredity violations: 0"), "{text}");
}
