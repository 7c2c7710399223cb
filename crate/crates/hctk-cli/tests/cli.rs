use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;
use tempfile::TempDir;

fn hctk(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hctk")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, text) = hctk(args);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn named(dir: &TempDir, name: &str) -> PathBuf {
    let p = dir.path().join(format!("{}.txt", name.replace(',', "_")));
    let (code, _) = hctk(&["generate", "named", name, "-o", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_c6() {
    let dir = TempDir::new().unwrap();
    let c6 = named(&dir, "C6");
    let (code, v) = json(&["classify", s(&c6)]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["status"], "ok");
    let p = &v["payload"];
    assert_eq!(
        (&p["hypercellular"], &p["cellular"], &p["median"], &p["polat"]),
        (&Value::Bool(true), &Value::Bool(true), &Value::Bool(false), &Value::Bool(true))
    );
}

#[test]
fn recognize_accepts_and_rejects() {
    let dir = TempDir::new().unwrap();
    let (code, v) = json(&["recognize", s(&named(&dir, "C6"))]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["lambda"], 3);
    assert_eq!(v["payload"]["coordinates"][0], "000");
    let (code, v) = json(&["recognize", s(&named(&dir, "K2,3"))]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "violation");
    assert_eq!(v["payload"]["reason"], "non_convex_w_set");
    let (code, v) = json(&["recognize", s(&named(&dir, "C5"))]);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["reason"], "non_bipartite");
}

#[test]
fn median_of_c6_is_the_whole_cycle() {
    let dir = TempDir::new().unwrap();
    let (code, v) = json(&["median", s(&named(&dir, "C6")), "0", "2", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["median_cell"]["vertices"], serde_json::json!([0, 1, 2, 3, 4, 5]));
    assert_eq!(v["payload"]["gates"], serde_json::json!([0, 2, 4]));
}

#[test]
fn median_fails_on_q3_minus() {
    let dir = TempDir::new().unwrap();
    let (code, v) = json(&["median", s(&named(&dir, "Q3_minus")), "3", "5", "6"]);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["no_median_cell"]["reason"], "not_a_cell");
}

#[test]
fn parse_errors_name_the_position() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "3 2\n0 1\n1 7\n");
    let (code, v) = json(&["recognize", s(&bad)]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "error");
    let msg = v["payload"]["message"].as_str().unwrap();
    assert!(msg.contains("line 3, column 3"), "{msg}");
}

#[test]
fn decompose_json_and_dot() {
    let dir = TempDir::new().unwrap();
    let p5 = named(&dir, "P5");
    let (code, v) = json(&["decompose", s(&p5)]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["leaves"], 4);
    assert_eq!(v["payload"]["verified"], true);
    let (code, dot) = hctk(&["decompose", s(&p5), "--dot"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph amalgam {"));
    let (code, v) = json(&["decompose", s(&named(&dir, "Q3_minus"))]);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["hypercellular"], false);
}

#[test]
fn cells_counts() {
    let dir = TempDir::new().unwrap();
    let c6 = named(&dir, "C6");
    let (_, all) = json(&["cells", s(&c6)]);
    // 6 vertices, 6 edges and the cycle.
    assert_eq!(all["payload"]["count"], 13);
    let (_, max) = json(&["cells", s(&c6), "--maximal"]);
    assert_eq!(max["payload"]["count"], 1);
    assert_eq!(max["payload"]["cells"][0]["signature"], serde_json::json!(["C6"]));
}

#[test]
fn minors_against_q3_minus() {
    let dir = TempDir::new().unwrap();
    let (code, v) = json(&["minors", s(&named(&dir, "Q3")), "--target", "q3minus"]);
    assert_eq!((code, &v["payload"]["found"]), (0, &Value::Bool(false)));
    let ex = dir.path().join("ex.txt");
    hctk(&["generate", "half-expanded", "3", "3", "-o", s(&ex)]);
    let (code, v) = json(&["minors", s(&ex), "--target", "q3minus"]);
    assert_eq!(code, 1);
    assert!(v["payload"]["witness"]["iso"].is_array());
    let c6 = named(&dir, "C6");
    let (code, _) = json(&["minors", s(&named(&dir, "Q3")), "--target", s(&c6)]);
    assert_eq!(code, 0);
}

#[test]
fn invariants_and_scale_guard() {
    let dir = TempDir::new().unwrap();
    let (code, v) = json(&["invariants", s(&named(&dir, "C6")), "--helly", "--radon"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"], serde_json::json!({"helly": 3, "radon": 3}));
    let (code, v) = json(&["invariants", s(&named(&dir, "Q4_minus")), "--pasch"]);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["pasch"]["holds"], false);
    let (code, v) = json(&["invariants", s(&named(&dir, "Q4")), "--helly"]);
    assert_eq!(code, 2);
    assert!(v["payload"]["message"].as_str().unwrap().contains("limit is 12"));
}

#[test]
fn fixed_cells() {
    let dir = TempDir::new().unwrap();
    let p5 = named(&dir, "P5");
    let (code, v) = json(&["fixed-cell", s(&p5)]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["cell"]["vertices"], serde_json::json!([2]));
    // The reflection of C6 through the vertices 0 and 3 fixes the whole cycle.
    let c6 = named(&dir, "C6");
    let map = write(&dir, "refl.txt", "0 0\n1 5\n2 4\n3 3\n4 2\n5 1\n");
    let (code, v) = json(&["fixed-cell", s(&c6), "--map", s(&map)]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["automorphism"], true);
    assert_eq!(v["payload"]["cell"]["signature"], serde_json::json!(["C6"]));
    let (code, v) = json(&["fixed-cell", s(&c6), "--map", s(&map), "--fixedset", "0,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["cell"]["vertices"].as_array().unwrap().len(), 6);
    let squash = write(&dir, "bad.txt", "0 0\n1 3\n2 2\n3 3\n4 4\n5 5\n");
    let (code, _) = json(&["fixed-cell", s(&c6), "--map", s(&squash)]);
    assert_eq!(code, 2);
}

#[test]
fn generate_is_deterministic() {
    let (code, a) = hctk(&["generate", "random", "6", "--seed", "42", "--json"]);
    assert_eq!(code, 0);
    let (_, b) = hctk(&["generate", "random", "6", "--seed", "42", "--json"]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert!(!v["payload"]["census"].as_array().unwrap().is_empty());
    let (code, _) = hctk(&["generate", "random", "6"]);
    assert_eq!(code, 2);
    let (_, text) = hctk(&["generate", "product", "C6", "K2"]);
    assert!(text.starts_with("12 18\n"));
    let (code, _) = hctk(&["generate", "product", "C5"]);
    assert_eq!(code, 2);
}

#[test]
fn output_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    hctk(&["generate", "product", "C6", "K2", "-o", s(&g)]);
    for cmd in [&["recognize"][..], &["cells", "--maximal"], &["decompose"], &["classify"]] {
        let mut args: Vec<&str> = vec![cmd[0], s(&g)];
        args.extend(&cmd[1..]);
        assert_eq!(hctk(&args), hctk(&args));
    }
}

#[test]
fn generate_dot() {
    let (code, text) = hctk(&["generate", "named", "C6", "--dot"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("graph G {\n"));
    assert_eq!(text.matches(" -- ").count(), 6);
    assert_ne!(hctk(&["generate", "named", "C6", "--dot", "--json"]).0, 0);
}
