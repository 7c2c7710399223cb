//! Every command's output validates against its schema under `docs/schemas`.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;
use tempfile::TempDir;

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas/v1").join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_hctk")).args(args).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    (out.status.code().unwrap(), serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}: {text}")))
}

struct Checker {
    envelope: jsonschema::Validator,
    seen: std::collections::BTreeSet<(String, String)>,
}

impl Checker {
    fn check(&mut self, args: &[&str]) -> Value {
        let (code, v) = run(args);
        let cmd = args[0];
        let status = v["status"].as_str().unwrap().to_string();
        let want = match status.as_str() {
            "ok" => 0,
            "violation" => 1,
            _ => 2,
        };
        assert_eq!(code, want, "{args:?}");
        for validator in [&self.envelope, &schema(cmd)] {
            let errors: Vec<String> = validator.iter_errors(&v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
            assert!(errors.is_empty(), "{args:?}: {errors:#?}\n{v:#}");
        }
        self.seen.insert((cmd.to_string(), status));
        v
    }
}

fn generate(dir: &TempDir, name: &str, spec: &[&str]) -> PathBuf {
    let p = dir.path().join(name);
    let mut args = vec!["generate"];
    args.extend_from_slice(spec);
    args.extend(["-o", p.to_str().unwrap()]);
    let out = Command::new(env!("CARGO_BIN_EXE_hctk")).args(&args).output().unwrap();
    assert!(out.status.success(), "{args:?}");
    p
}

#[test]
fn outputs_match_schemas() {
    let dir = TempDir::new().unwrap();
    let mut c = Checker {
        envelope: schema("envelope"),
        seen: Default::default(),
    };
    let mut files = vec![
        generate(&dir, "c6", &["named", "C6"]),
        generate(&dir, "q3m", &["named", "Q3_minus"]),
        generate(&dir, "q4m", &["named", "Q4_minus"]),
        generate(&dir, "c6k2", &["product", "C6", "K2"]),
        generate(&dir, "k1", &["named", "K1"]),
        generate(&dir, "rand", &["random", "3", "--seed", "5", "--max-vertices", "40"]),
        generate(&dir, "sub", &["subdivision", "4"]),
        generate(&dir, "half", &["half-expanded", "3", "2"]),
    ];
    for i in (0..59).step_by(7) {
        files.push(generate(&dir, &format!("cat{i}"), &["catalog", "4", &i.to_string()]));
    }
    let non_pc = [generate(&dir, "k23", &["named", "K2,3"]), generate(&dir, "c5", &["named", "C5"])];
    for f in non_pc.iter().chain(&files) {
        let f = f.to_str().unwrap();
        c.check(&["recognize", f]);
        c.check(&["classify", f]);
    }
    for f in &files {
        let f = f.to_str().unwrap();
        c.check(&["cells", f]);
        c.check(&["cells", f, "--maximal"]);
        c.check(&["decompose", f]);
        c.check(&["fixed-cell", f]);
        c.check(&["minors", f, "--target", "q3minus"]);
        let small = f.ends_with("c6") || f.ends_with("q3m") || f.ends_with("k1") || f.ends_with("half");
        if small {
            c.check(&["invariants", f]);
        }
        c.check(&["invariants", f, "--pasch", "--peano"]);
        let n: usize = std::fs::read_to_string(f).unwrap().split_whitespace().next().unwrap().parse().unwrap();
        for (u, v, w) in [(0, n / 2, n - 1), (0, n / 3, 2 * n / 3)] {
            c.check(&["median", f, &u.to_string(), &v.to_string(), &w.to_string()]);
        }
    }
    // A triple without a median cell in Q4 minus a vertex.
    let q4m = files[2].to_str().unwrap();
    let n = 15;
    let mut violated = false;
    'outer: for u in 0..n {
        for v in u..n {
            for w in v..n {
                let out = c.check(&["median", q4m, &u.to_string(), &v.to_string(), &w.to_string()]);
                if out["status"] == "violation" {
                    violated = true;
                    break 'outer;
                }
            }
        }
    }
    assert!(violated);
    let map = dir.path().join("map");
    std::fs::write(&map, "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n").unwrap();
    let c6 = files[0].to_str().unwrap();
    c.check(&["fixed-cell", c6, "--map", map.to_str().unwrap()]);
    c.check(&["fixed-cell", c6, "--map", map.to_str().unwrap(), "--fixedset", "0,3"]);
    c.check(&["minors", q4m, "--target", files[1].to_str().unwrap()]);
    for spec in [
        &["product", "C6", "K2"][..],
        &["named", "K2,3"],
        &["subdivision", "4"],
        &["half-expanded", "3", "3"],
        &["random", "2", "--seed", "1"],
        &["catalog", "3", "2"],
    ] {
        let mut args = vec!["generate"];
        args.extend_from_slice(spec);
        args.push("--json");
        c.check(&args);
    }
    // Errors share one payload shape.
    c.check(&["cells", "/nonexistent/graph"]);
    c.check(&["recognize", non_pc[0].to_str().unwrap().trim_end_matches("k23")]);
    c.check(&["invariants", generate(&dir, "big", &["product", "C8", "C8"]).to_str().unwrap(), "--helly"]);
    c.check(&["generate", "random", "2"]);
    c.check(&["median", c6, "0", "1", "99"]);

    for (cmd, status) in [
        ("recognize", "violation"),
        ("decompose", "ok"),
        ("decompose", "violation"),
        ("median", "ok"),
        ("median", "violation"),
        ("minors", "ok"),
        ("minors", "violation"),
        ("invariants", "violation"),
        ("invariants", "error"),
    ] {
        assert!(c.seen.contains(&(cmd.into(), status.into())), "{cmd} never produced {status}");
    }
}

#[test]
fn schemas_reject_malformed_payloads() {
    let dir = TempDir::new().unwrap();
    let c6 = generate(&dir, "c6", &["named", "C6"]);
    let (_, mut v) = run(&["classify", c6.to_str().unwrap()]);
    let classify = schema("classify");
    assert!(classify.is_valid(&v));
    v["payload"].as_object_mut().unwrap().remove("polat");
    assert!(!classify.is_valid(&v));
    let (_, mut v) = run(&["median", c6.to_str().unwrap(), "0", "2", "4"]);
    let median = schema("median");
    assert!(median.is_valid(&v));
    v["payload"]["gates"] = serde_json::json!([0, 2]);
    assert!(!median.is_valid(&v));
    v["status"] = "violation".into();
    assert!(!median.is_valid(&v));
    let (_, mut v) = run(&["decompose", c6.to_str().unwrap()]);
    v["payload"]["tree"]["kind"] = "node".into();
    assert!(!schema("decompose").is_valid(&v));
    assert!(!schema("cells").is_valid(&v));
}
