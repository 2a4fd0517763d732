use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use autspine::freegroup::Endomorphism;
use autspine::spine::{rose_vertex, MarkedGraphJson, Mode, SpineVertex};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autspine")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("autspine-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const ROSE3: &str = r#"{"vertices":[0],"edges":[{"id":1,"from":0,"to":0},{"id":2,"from":0,"to":0},{"id":3,"from":0,"to":0}],"marking":MARKING}"#;

fn rose_file(name: &str, marking: &str) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, ROSE3.replace("MARKING", marking)).unwrap();
    p
}

#[test]
fn word_lengths_and_closure() {
    let out = run(&["word", "--i", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["length"], 12);
    assert_eq!(j["closes"], true);
    assert_eq!(j["transvections"].as_array().unwrap().len(), 12);
    assert_eq!(json_of(&run(&["word", "--i", "10"]))["length"], 84);
}

#[test]
fn zero_or_missing_index_is_a_usage_error() {
    assert_eq!(run(&["word", "--i", "0"]).status.code(), Some(2));
    assert_eq!(run(&["word"]).status.code(), Some(2));
    assert_eq!(run(&["loop", "--i", "x"]).status.code(), Some(2));
}

#[test]
fn loop_json_and_dot() {
    let out = run(&["loop", "--i", "2", "--emit", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["length"], 40);
    assert_eq!(j["vertices"].as_array().unwrap().len(), 40);
    assert_eq!(j["closed"], true);

    let out = run(&["loop", "--i", "1", "--emit", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph loop {"));
    assert_eq!(dot.matches(" -- ").count(), 24);
    assert!(dot.contains("s23 -- s0;"));
}

#[test]
fn loop_three_is_adjacent_throughout() {
    let j = json_of(&run(&["loop", "--i", "3"]));
    // 16i + 8 vertices, so as many consecutive pairs.
    assert_eq!(j["length"], 56);
    assert!(j["first_non_adjacent"].is_null());
}

#[test]
fn unknown_emit_format_is_rejected() {
    let out = run(&["loop", "--i", "1", "--emit", "svg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    let out = run(&["verify", "square", "--samples", "100", "--m", "2", "--n", "3", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["pass"], true);
    assert_eq!(j["samples"], 100);
    assert_eq!(j["failures"].as_array().unwrap().len(), 0);
    assert_eq!(j["schema_version"], 1);

    let j = json_of(&run(&["verify", "rho", "--samples", "50", "--m", "2", "--n", "3"]));
    assert_eq!((j["pass"].clone(), j["suite"].clone()), (Value::Bool(true), Value::from("rho")));

    let j = json_of(&run(&["verify", "growth", "--i", "20"]));
    assert_eq!(j["pass"], true);
    let ratio = j["details"]["ratio"].as_f64().unwrap();
    assert!((ratio - 2.618).abs() < 0.01);
}

#[test]
fn verify_reports_are_byte_identical() {
    let (a, b) = (scratch("a.json"), scratch("b.json"));
    for p in [&a, &b] {
        let out = run(&["verify", "rho", "--samples", "20", "--seed", "3", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!String::from_utf8(std::fs::read(&a).unwrap()).unwrap().contains("wall_time"));

    let timed = json_of(&run(&["verify", "growth", "--timing"]));
    assert!(timed["wall_time_ms"].is_u64());
}

#[test]
fn verify_rejects_bad_arguments() {
    assert_eq!(run(&["verify", "cube"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "square", "--m", "3", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "rho", "--m", "2", "--n", "6"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "area", "--budget", "11"]).status.code(), Some(2));
}

#[test]
fn verify_out_to_unwritable_path_is_an_io_error() {
    let bad = scratch("missing-dir").join("nested").join("r.json");
    let out = run(&["verify", "growth", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

fn result_vertex(out: &Output) -> SpineVertex {
    let j = json_of(out);
    let parsed: MarkedGraphJson = serde_json::from_value(j["result"].clone()).unwrap();
    SpineVertex::from_json(&parsed).unwrap()
}

#[test]
fn restrict_identity_rose() {
    let p = rose_file("id.json", "[[1],[2],[3]]");
    let out = run(&["restrict", p.to_str().unwrap(), "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let expected = rose_vertex(&Endomorphism::identity(2), Mode::K).unwrap();
    assert!(result_vertex(&out).equivalent(&expected));
    assert_eq!(json_of(&out)["trace"]["core_vertices"], 1);
}

#[test]
fn restrict_t_marked_rose() {
    let p = rose_file("t.json", "[[1,1,2],[1,2],[3]]");
    let out = run(&["restrict", p.to_str().unwrap(), "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let expected = rose_vertex(&Endomorphism::parse_images(&["a1a1a2", "a1a2"]).unwrap(), Mode::K).unwrap();
    assert!(result_vertex(&out).equivalent(&expected));
}

#[test]
fn restrict_reports_parse_position() {
    let p = scratch("corrupt.json");
    std::fs::write(&p, "{\"vertices\": [0],\n \"edges\": [{\"id\": 1,, }]}").unwrap();
    let out = run(&["restrict", p.to_str().unwrap(), "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2 column"), "{err}");
}

#[test]
fn restrict_rejects_invalid_marking() {
    // The marking does not generate F_3.
    let p = rose_file("notaut.json", "[[1,1],[2],[3]]");
    assert_eq!(run(&["restrict", p.to_str().unwrap(), "--m", "2"]).status.code(), Some(2));
    assert_eq!(run(&["restrict", "/nonexistent/input.json", "--m", "2"]).status.code(), Some(2));
}
