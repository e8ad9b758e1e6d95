//! End-to-end checks of the binary: exit codes, output shapes, seed handling
//! and report reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

use modgroup::{codec, fixtures, silhouette};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_modgroup"));
    c.env_remove("MODGROUP_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("modgroup-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn stallings_emits_canonical_json() {
    let out = run(&["stallings", "--gens", "a"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        r#"{"n":1,"alpha":[[1,1]],"beta":[],"root":1}"#
    );
}

#[test]
fn bad_generator_words_exit_1() {
    let out = run(&["stallings", "--gens", "axb"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["stallings", "--nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    // Plot data cannot go to stdout when the report is already there.
    let cfg = temp_file(
        "plot.json",
        r#"{"experiment":"connectivity","sizes":[30],"samples-per-size":100}"#,
    );
    let out = run(&[
        "experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--emit-plot-data",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Enumeration sizes past the oracle limit are refused up front.
    let out = run(&["oracle", "--verify", "preimages", "--n", "99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("enumeration limit"));
}

#[test]
fn malformed_graphs_exit_1() {
    let path = temp_file(
        "chain.json",
        r#"{"n":3,"alpha":[[1,2]],"beta":[[1,2],[2,3]],"root":null}"#,
    );
    let out = run(&["check", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_reports_subgroup_properties() {
    let path = temp_file("h.json", &codec::to_json(&fixtures::graph_h()));
    let out = run(&["check", "--in", path.to_str().unwrap()]);
    assert!(out.status.success());
    let verdict: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(verdict["n"], 6);
    assert_eq!(verdict["root"], 1);
    assert_eq!(verdict["type"]["k2"], 3);
    assert_eq!(verdict["free"], true);
    assert_eq!(verdict["index"], 6);
    assert_eq!(verdict["parabolic"], true);
    assert_eq!(verdict["almost_malnormal"], false);

    let path = temp_file("k.json", &codec::to_json(&fixtures::graph_k()));
    let out = run(&["check", "--in", path.to_str().unwrap(), "--props", "free,index"]);
    assert!(out.status.success());
    let verdict: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(verdict["type"]["k3"], 1);
    assert_eq!(verdict["free"], false);
    assert_eq!(verdict["index"], serde_json::Value::Null);

    let out = run(&["check", "--in", path.to_str().unwrap(), "--props", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn silhouette_trace_ends_at_the_silhouette() {
    let path = temp_file("l.json", &codec::to_json(&fixtures::graph_l()));
    let out = run(&["silhouette", "--in", path.to_str().unwrap(), "--trace"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() > 1);
    for move_line in &lines[..lines.len() - 1] {
        let m: serde_json::Value = serde_json::from_str(move_line).unwrap();
        assert!(m["kind"].is_string() && m["pivots"].is_array());
    }
    assert_eq!(
        *lines.last().unwrap(),
        codec::to_json(&fixtures::silhouette_of_l())
    );
}

#[test]
fn convert_roundtrips_between_formats() {
    let json = codec::to_json(&fixtures::graph_h());
    let path = temp_file("h.json", &json);
    let as_dot = run(&["convert", "--in", path.to_str().unwrap()]);
    assert!(as_dot.status.success());
    assert!(stdout(&as_dot).contains("label=a"));
    let dot_path = temp_file("h.dot", &stdout(&as_dot));
    let back = run(&["convert", "--in", dot_path.to_str().unwrap()]);
    assert!(back.status.success());
    assert_eq!(stdout(&back).trim(), json);
}

#[test]
fn sampling_is_seed_deterministic() {
    let args = ["sample", "--mode", "cyc", "--n", "12", "--count", "3", "--seed", "5"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let other = run(&["sample", "--mode", "cyc", "--n", "12", "--count", "3", "--seed", "6"]);
    assert_ne!(first.stdout, other.stdout);
    // Each draw is a valid graph.
    let doc: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(doc.as_array().unwrap().len(), 3);
    for g in doc.as_array().unwrap() {
        assert_eq!(g["n"], 12);
        codec::from_json(&g.to_string()).unwrap();
    }
}

#[test]
fn seed_env_variable_overrides_the_flag() {
    let seeded = run(&["sample", "--mode", "silh", "--n", "12", "--seed", "5"]);
    let overridden = bin()
        .args(["sample", "--mode", "silh", "--n", "12", "--seed", "99"])
        .env("MODGROUP_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(seeded.stdout, overridden.stdout);
    let bad = bin()
        .args(["sample", "--mode", "silh", "--n", "12"])
        .env("MODGROUP_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn experiment_reports_are_reproducible() {
    let cfg = temp_file(
        "conn.json",
        r#"{"experiment":"connectivity","sizes":[30],"samples-per-size":200,"master-seed":3}"#,
    );
    let first = run(&["experiment", "--config", cfg.to_str().unwrap()]);
    let second = run(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.starts_with("# modgroup "));
    assert!(text.contains("\"master-seed\":3"));

    let report = std::env::temp_dir().join(format!("modgroup-cli-{}-report.csv", std::process::id()));
    let plotted = run(&[
        "experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
        "--emit-plot-data",
    ]);
    assert!(plotted.status.success());
    assert!(stdout(&plotted).starts_with("n,frequency,stderr"));
    assert_eq!(std::fs::read_to_string(&report).unwrap(), text);
}

#[test]
fn oracle_counts_include_the_exact_census() {
    let out = run(&["oracle", "--verify", "counts", "--n", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().starts_with("n,total,"));
    assert!(text.lines().any(|l| l == "4,330,330,144,144"), "{text}");
}

#[test]
fn silhouette_of_a_sampled_graph_matches_the_library() {
    let sample = run(&["sample", "--mode", "cyc", "--n", "18", "--seed", "11"]);
    let path = temp_file("sampled.json", stdout(&sample).trim());
    let out = run(&["silhouette", "--in", path.to_str().unwrap()]);
    assert!(out.status.success());
    let expected = silhouette::silhouette(&codec::from_json(stdout(&sample).trim()).unwrap()).unwrap();
    assert_eq!(stdout(&out).trim(), codec::to_json(&expected));
}
