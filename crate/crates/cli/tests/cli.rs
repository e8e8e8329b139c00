use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use seqroctm::io::{parse_chain_document, parse_sequence, parse_tree_document};
use seqroctm::{admissible_tree, Alphabet, Context};
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    run_with_threads(args, None)
}

fn run_with_threads(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_seqroctm"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("SEQROCTM_THREADS", t),
        None => cmd.env_remove("SEQROCTM_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Simulated stimulus and categorical responses in `dir`.
fn simulate_pair(dir: &Path, model: &str, response: &str, length: usize, seed: u64) -> (PathBuf, PathBuf) {
    let x = dir.join("x.txt");
    let y = dir.join("y.txt");
    ok(&[
        "simulate",
        "--tree",
        s(&fixture(model)),
        "--length",
        &length.to_string(),
        "--seed",
        &seed.to_string(),
        "--response-tree",
        s(&fixture(response)),
        "--out-x",
        s(&x),
        "--out-y",
        s(&y),
    ]);
    (x, y)
}

fn contexts(doc: &str) -> Vec<Context> {
    let doc = parse_tree_document(doc).unwrap();
    let mut v = doc.tree().unwrap().contexts().to_vec();
    v.sort();
    v
}

fn sorted(v: &[&[u8]]) -> Vec<Context> {
    let mut v: Vec<Context> = v.iter().map(|c| Context::from(*c)).collect();
    v.sort();
    v
}

#[test]
fn simulate_writes_requested_length() {
    let goalkeeper = ok(&["simulate", "--tree", s(&fixture("goalkeeper.json")), "--length", "300", "--seed", "1"]);
    let x = parse_sequence(&goalkeeper).unwrap();
    assert_eq!(x.len(), 300);
    assert!(x.iter().all(|&v| v < 3));
    assert_eq!(goalkeeper.lines().count(), 1);
    for w in x.windows(2) {
        // a 0 is always followed by a 1 and a 2 by a 0
        if w[0] == 0 {
            assert_eq!(w[1], 1);
        }
        if w[0] == 2 {
            assert_eq!(w[1], 0);
        }
    }
    let beat = ok(&["simulate", "--tree", s(&fixture("beat.json")), "--length", "800"]);
    assert_eq!(parse_sequence(&beat).unwrap().len(), 800);
}

#[test]
fn simulate_rejects_zero_length_and_bad_trees() {
    let out = run(&["simulate", "--tree", s(&fixture("goalkeeper.json")), "--length", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"alphabet_size": 2, "contexts": [[1], [0, 1]], "transitions": [[1, 0], [0, 1]]}"#).unwrap();
    let out = run(&["simulate", "--tree", s(&bad), "--length", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("suffix"));
    let out = run(&["simulate", "--tree", s(&dir.path().join("missing.json")), "--length", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bic_at_zero_keeps_the_admissible_tree() {
    let dir = TempDir::new().unwrap();
    let (x, y) = simulate_pair(dir.path(), "goalkeeper.json", "strategy1.json", 500, 4);
    let doc = ok(&["estimate", "bic", "--x", s(&x), "--y", s(&y), "--height", "3", "--c", "0"]);
    let seq = parse_sequence(&fs::read_to_string(&x).unwrap()).unwrap();
    let mut expected = admissible_tree(&seq, Alphabet::new(3).unwrap(), 3).unwrap().contexts().to_vec();
    expected.sort();
    assert_eq!(contexts(&doc), expected);
}

#[test]
fn delta_above_one_gives_the_root() {
    let dir = TempDir::new().unwrap();
    let (x, y) = simulate_pair(dir.path(), "goalkeeper.json", "strategy1.json", 500, 4);
    let report = dir.path().join("report.txt");
    let doc = ok(&[
        "estimate", "delta", "--x", s(&x), "--y", s(&y), "--height", "3", "--delta", "1.5", "--report", s(&report),
    ]);
    assert!(parse_tree_document(&doc).unwrap().tree().unwrap().is_root());
    let text = fs::read_to_string(report).unwrap();
    assert!(text.contains("delta: 1.5"));
    assert!(!text.contains("\tkeep"));
}

#[test]
fn functional_estimate_runs_with_the_reference_call() {
    let dir = TempDir::new().unwrap();
    let x = dir.path().join("x.txt");
    let y = dir.path().join("y.csv");
    ok(&[
        "simulate",
        "--tree",
        s(&fixture("beat.json")),
        "--length",
        "300",
        "--seed",
        "5",
        "--emitters",
        s(&fixture("beat_emitters.json")),
        "--out-x",
        s(&x),
        "--out-y",
        s(&y),
    ]);
    let csv = fs::read_to_string(&y).unwrap();
    assert_eq!(csv.lines().count(), 16);
    assert!(csv.lines().all(|l| l.split(',').count() == 300));
    let doc = ok(&[
        "estimate", "functional", "--x", s(&x), "--y-functional", s(&y), "--height", "3", "--nbm", "1000", "--alpha",
        "0.05", "--beta", "0.05", "--seed", "0",
    ]);
    let parsed = parse_tree_document(&doc).unwrap();
    assert_eq!(parsed.metadata["nbm"], 1000);
    // the two informative splits are always found at this separation
    let leaves = contexts(&doc);
    for w in [&[0u8, 0][..], &[1, 0], &[2, 0], &[0, 1], &[1, 1], &[2, 1]] {
        assert!(leaves.iter().any(|c| c.symbols().ends_with(w)), "no leaf under {w:?}");
    }
}

#[test]
fn ctm_estimate_recovers_the_stimulus_model() {
    let dir = TempDir::new().unwrap();
    let x = dir.path().join("x.txt");
    ok(&["simulate", "--tree", s(&fixture("goalkeeper.json")), "--length", "10000", "--seed", "2", "--out-x", s(&x)]);
    let doc = ok(&["estimate", "ctm", "--x", s(&x), "--height", "4", "--c", "1"]);
    assert_eq!(contexts(&doc), sorted(&[&[0], &[2], &[0, 1], &[1, 1]]));
}

#[test]
fn champions_csv_matches_the_chain() {
    let dir = TempDir::new().unwrap();
    let (x, y) = simulate_pair(dir.path(), "goalkeeper.json", "strategy2.json", 1000, 9);
    let chain_path = dir.path().join("chain.json");
    let csv_path = dir.path().join("chain.csv");
    ok(&[
        "champions", "--x", s(&x), "--y", s(&y), "--height", "4", "--out", s(&chain_path), "--csv", s(&csv_path),
    ]);
    let chain = parse_chain_document(&fs::read_to_string(&chain_path).unwrap()).unwrap();
    let csv = fs::read_to_string(&csv_path).unwrap();
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), chain.len());
    for w in rows.windows(2) {
        assert!(w[1][1] <= w[0][1], "leaves increase");
        assert!(w[1][2] <= w[0][2], "log-likelihood increases");
        assert!(w[1][3] > w[0][3], "cutoffs not increasing");
    }
    assert!(chain.reached_root());
}

fn tune_selects(response: &str, bootstrap: &str, seed: u64) -> Vec<Context> {
    let dir = TempDir::new().unwrap();
    let (x, y) = simulate_pair(dir.path(), "goalkeeper.json", response, 3000, seed);
    let doc = ok(&[
        "tune", "--x", s(&x), "--y", s(&y), "--height", "6", "--bootstrap", bootstrap, "--seed", &seed.to_string(),
    ]);
    contexts(&doc)
}

#[test]
fn strategy_one_pipeline_selects_one_step_contexts() {
    assert_eq!(tune_selects("strategy1.json", "none", 1), sorted(&[&[0], &[1], &[2]]));
}

#[test]
fn strategy_two_pipeline_with_blocks_selects_the_stimulus_tree() {
    assert_eq!(
        tune_selects("strategy2.json", "blocks", 2),
        sorted(&[&[0], &[2], &[0, 1], &[1, 1]])
    );
}

#[test]
fn tune_rejects_inverted_sizes() {
    let dir = TempDir::new().unwrap();
    let (x, y) = simulate_pair(dir.path(), "goalkeeper.json", "strategy1.json", 300, 1);
    let out = run(&["tune", "--x", s(&x), "--y", s(&y), "--height", "3", "--n1", "200", "--n2", "100"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["tune", "--x", s(&x), "--y", s(&y)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_inputs_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let x = dir.path().join("x.txt");
    fs::write(&x, "0 1 two 0\n").unwrap();
    let out = run(&["estimate", "ctm", "--x", s(&x), "--height", "2", "--c", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let chain = dir.path().join("chain.json");
    fs::write(&chain, r#"{"alphabet_size": 2, "height": 1, "c_max": 1.0, "champions": []}"#).unwrap();
    fs::write(&x, "0 1 1 0 1 0 0 1\n").unwrap();
    let out = run(&["tune", "--x", s(&x), "--chain", s(&chain)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_export_shapes() {
    let dir = TempDir::new().unwrap();
    let root = dir.path().join("root.json");
    fs::write(&root, r#"{"alphabet_size": 3, "contexts": []}"#).unwrap();
    let dot = ok(&["export-dot", "--tree", s(&root)]);
    assert_eq!(dot.matches("->").count(), 0);
    assert_eq!(dot.matches("shape=box").count(), 1);

    let dot = ok(&["export-dot", "--tree", s(&fixture("goalkeeper.json"))]);
    assert_eq!(dot.matches("shape=box").count(), 4);
    assert!(dot.contains("n_1_1 ") && !dot.contains("n_0_1_1"));

    let dot = ok(&["export-dot", "--tree", s(&fixture("beat.json")), "--no-probabilities"]);
    assert_eq!(dot.matches("shape=box").count(), 7);
    assert!(!dot.contains("\\n["), "probabilities were not dropped");
    // depth 2: no node id has three symbols
    assert!(!dot.lines().any(|l| l.trim_start().starts_with("n_") && l.split_whitespace().next().unwrap().matches('_').count() > 2));
}

/// Every file written by a seeded pipeline, concatenated.
fn pipeline_outputs(threads: &str) -> Vec<u8> {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let p = |name: &str| d.join(name);
    let steps: Vec<Vec<String>> = vec![
        vec!["simulate", "--tree", s(&fixture("goalkeeper.json")), "--length", "1500", "--seed", "11", "--response-tree", s(&fixture("strategy2.json")), "--out-x", s(&p("x")), "--out-y", s(&p("y"))],
        vec!["champions", "--x", s(&p("x")), "--y", s(&p("y")), "--height", "4", "--out", s(&p("chain")), "--csv", s(&p("csv"))],
        vec!["tune", "--x", s(&p("x")), "--y", s(&p("y")), "--chain", s(&p("chain")), "--bootstrap", "blocks", "--B", "80", "--seed", "4", "--out", s(&p("sel")), "--report", s(&p("rep"))],
        vec!["tune", "--x", s(&p("x")), "--y", s(&p("y")), "--chain", s(&p("chain")), "--bootstrap", "parametric", "--B", "40", "--seed", "4", "--out", s(&p("sel2"))],
        vec!["simulate", "--tree", s(&fixture("beat.json")), "--length", "400", "--seed", "3", "--emitters", s(&fixture("beat_emitters.json")), "--out-x", s(&p("fx")), "--out-y", s(&p("fy"))],
        vec!["estimate", "functional", "--x", s(&p("fx")), "--y-functional", s(&p("fy")), "--height", "3", "--nbm", "500", "--seed", "8", "--out", s(&p("ftree")), "--report", s(&p("frep"))],
        vec!["export-dot", "--tree", s(&p("sel")), "--out", s(&p("dot"))],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for step in &steps {
        let args: Vec<&str> = step.iter().map(String::as_str).collect();
        let out = run_with_threads(&args, Some(threads));
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let mut all = Vec::new();
    for name in ["x", "y", "chain", "csv", "sel", "rep", "sel2", "fx", "fy", "ftree", "frep", "dot"] {
        all.extend(fs::read(p(name)).unwrap());
        all.push(0);
    }
    all
}

#[test]
fn seeded_pipeline_is_byte_identical_across_thread_counts() {
    let one = pipeline_outputs("1");
    let again = pipeline_outputs("1");
    let four = pipeline_outputs("4");
    assert!(one == again, "reruns differ");
    assert!(one == four, "1 and 4 worker threads differ");
}
