use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use raag_core::{enumerate_partitions, families};
use serde_json::Value;

fn raag(cache: &Path) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_raag"));
    c.env("RAAG_CACHE_DIR", cache);
    c
}

fn run(cache: &Path, args: &[&str]) -> Output {
    raag(cache).args(args).output().unwrap()
}

fn run_stdin(cache: &Path, args: &[&str], input: &str) -> Output {
    let mut child = raag(cache)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_graph(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn rake_file(dir: &Path, d: usize) -> PathBuf {
    write_graph(
        dir,
        &format!("t{d}.graph"),
        &families::rake(d).unwrap().canonical_text(),
    )
}

#[test]
fn analyze_two_rake() {
    let tmp = tempfile::tempdir().unwrap();
    let t2 = rake_file(tmp.path(), 2);
    let r = json(&run(tmp.path(), &["analyze", "--format", "json", t2.to_str().unwrap()]));
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["principal_rank"]["size"], 5);
    assert_eq!(r["spine_dimension"]["size"], 6);
    assert_eq!(r["vcd"]["kind"], "exact");
    assert_eq!(r["vcd"]["value"], 5);
    let report: raag_core::AnalysisReport = serde_json::from_value(r).unwrap();
    assert_eq!(report.partition_count, 28);
}

#[test]
fn analyze_complete_graph_text() {
    let tmp = tempfile::tempdir().unwrap();
    let k3 = write_graph(tmp.path(), "k3.graph", "edge a b\nedge b c\nedge a c\n");
    let out = run(tmp.path(), &["analyze", "--graph", k3.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("M(L) = 0"));
    assert!(text.contains("M(V) = 0"));
}

#[test]
fn partitions_match_enumeration() {
    let tmp = tempfile::tempdir().unwrap();
    let t2 = rake_file(tmp.path(), 2);
    let r = json(&run(
        tmp.path(),
        &["partitions", "--base", "u", "--format", "json", t2.to_str().unwrap()],
    ));
    let g = families::rake(2).unwrap();
    let expected: Vec<_> = enumerate_partitions(&g, g.vertex("u").unwrap())
        .unwrap()
        .partitions
        .iter()
        .map(|p| p.to_json(&g))
        .collect();
    assert_eq!(r["count"], 2);
    assert_eq!(r["partitions"], serde_json::to_value(expected).unwrap());
}

#[test]
fn apply_aut_table() {
    let tmp = tempfile::tempdir().unwrap();
    let t2 = rake_file(tmp.path(), 2);
    let r = json(&run(
        tmp.path(),
        &[
            "apply-aut",
            "--side",
            "a1,u",
            "--base",
            "a1",
            "--format",
            "json",
            t2.to_str().unwrap(),
        ],
    ));
    let images = r["images"].as_array().unwrap();
    let image = |v: &str| {
        images.iter().find(|e| e["generator"] == v).unwrap()["image"]
            .as_str()
            .unwrap()
            .to_string()
    };
    assert_eq!(image("u"), "u·a1^-1");
    assert_eq!(image("a1"), "a1");
    assert_eq!(image("b2"), "b2");
}

#[test]
fn generated_delta_through_stdin() {
    let tmp = tempfile::tempdir().unwrap();
    let gen = run(tmp.path(), &["gen", "--family", "delta"]);
    assert!(gen.status.success());
    let text = String::from_utf8(gen.stdout).unwrap();
    let file = write_graph(tmp.path(), "delta.graph", &text);
    let piped = json(&run_stdin(tmp.path(), &["analyze", "--format", "json", "-"], &text));
    let direct = json(&run(
        tmp.path(),
        &["analyze", "--format", "json", file.to_str().unwrap()],
    ));
    assert_eq!(piped, direct);
    assert_eq!(direct["principal_rank"]["size"], 11);
    assert_eq!(direct["spine_dimension"]["size"], 14);
}

#[test]
fn max_set_scopes() {
    let tmp = tempfile::tempdir().unwrap();
    let t3 = rake_file(tmp.path(), 3);
    let p = t3.to_str().unwrap();
    let size = |flag: &[&str]| {
        let mut args = vec!["max-set", "--format", "json", p];
        args.extend_from_slice(flag);
        json(&run(tmp.path(), &args))["size"].as_u64().unwrap()
    };
    assert_eq!(size(&["--principal"]), 8);
    assert_eq!(size(&["--all"]), 10);
    assert_eq!(
        size(&["--vertices", "u"]),
        brute_force_max(&families::rake(3).unwrap(), "u")
    );
}

/// Largest pairwise-compatible subset of the partitions based at one vertex.
fn brute_force_max(g: &raag_core::SimplicialGraph, base: &str) -> u64 {
    let ps = enumerate_partitions(g, g.vertex(base).unwrap()).unwrap().partitions;
    (0u32..1 << ps.len())
        .filter(|mask| {
            let chosen: Vec<_> = (0..ps.len()).filter(|i| mask >> i & 1 == 1).collect();
            chosen.iter().all(|&i| {
                chosen
                    .iter()
                    .all(|&j| i == j || raag_core::is_compatible(&ps[i], &ps[j]))
            })
        })
        .map(|mask| mask.count_ones() as u64)
        .max()
        .unwrap()
}

#[test]
fn conditions_report() {
    let tmp = tempfile::tempdir().unwrap();
    let gen = run(tmp.path(), &["gen", "--family", "cond1-violator"]);
    let r = json(&run_stdin(
        tmp.path(),
        &["conditions", "--format", "json", "-"],
        &String::from_utf8(gen.stdout).unwrap(),
    ));
    assert_eq!(r["condition1"]["holds"], false);
    assert_eq!(r["schema_version"], 1);
}

#[test]
fn retract_writes_trace() {
    let tmp = tempfile::tempdir().unwrap();
    let t1 = rake_file(tmp.path(), 1);
    let trace = tmp.path().join("trace.json");
    let r = json(&run(
        tmp.path(),
        &[
            "retract",
            "--format",
            "json",
            "--graph",
            t1.to_str().unwrap(),
            "--trace",
            trace.to_str().unwrap(),
        ],
    ));
    assert_eq!(r["survivors_match"], true);
    assert_eq!(r["after"]["dimension"], 2);
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["schema_version"], 1);
    assert_eq!(t["after"]["f_vector"], r["after"]["f_vector"]);
    assert!(t["events"].is_array());
}

#[test]
fn verify_replacement_on_delta() {
    let tmp = tempfile::tempdir().unwrap();
    let gen = run(tmp.path(), &["gen", "--family", "delta"]);
    let out = run_stdin(
        tmp.path(),
        &[
            "verify",
            "--lemma",
            "cond2-conclusion",
            "--first",
            "u1,u2",
            "--second",
            "u1,u2",
            "--principal-bases",
            "a2",
            "-",
        ],
        &String::from_utf8(gen.stdout).unwrap(),
    );
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("replacement: pass"));
}

#[test]
fn failed_verification_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    let gen = run(tmp.path(), &["gen", "--family", "cond1-violator"]);
    let out = run_stdin(
        tmp.path(),
        &["verify", "--lemma", "cond1", "-"],
        &String::from_utf8(gen.stdout).unwrap(),
    );
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write_graph(tmp.path(), "bad.graph", "edge a\n");
    assert_eq!(
        run(tmp.path(), &["analyze", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let t2 = rake_file(tmp.path(), 2);
    let p = t2.to_str().unwrap();
    assert_eq!(
        run(tmp.path(), &["partitions", "--base", "zz", p]).status.code(),
        Some(2)
    );
    assert_eq!(run(tmp.path(), &["retract", "--cap", "10", p]).status.code(), Some(3));
    assert_eq!(run(tmp.path(), &["retract", p]).status.code(), Some(1));
    assert_eq!(run(tmp.path(), &["retract", "--permissive", p]).status.code(), Some(0));
}

#[test]
fn cache_directory_is_used() {
    let tmp = tempfile::tempdir().unwrap();
    let cache = tmp.path().join("cache");
    let t2 = rake_file(tmp.path(), 2);
    let first = json(&run(
        &cache,
        &["max-set", "--all", "--format", "json", t2.to_str().unwrap()],
    ));
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = json(&run(
        &cache,
        &["max-set", "--all", "--format", "json", t2.to_str().unwrap()],
    ));
    assert_eq!(first, second);
}

#[test]
fn gen_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let a = run(tmp.path(), &["gen", "--family", "rake", "--d", "3"]).stdout;
    let b = run(tmp.path(), &["gen", "--family", "rake", "--d", "3"]).stdout;
    assert_eq!(a, b);
    assert_eq!(
        String::from_utf8(a).unwrap(),
        families::rake(3).unwrap().canonical_text()
    );
    assert_eq!(run(tmp.path(), &["gen", "--family", "rake"]).status.code(), Some(1));
}
