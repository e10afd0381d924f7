use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const A2: &str = r#"{"n":2,"m":2,"multipliers":[1,1],"epsilon_hat":[["0","1"],["-1","0"]],"labels":["x1","x2"],"frozen":[]}"#;
const A1_FROZEN: &str = r#"{"n":2,"m":1,"multipliers":[1],"epsilon_hat":[["0","1"],["-1","0"]],"labels":["x1","x2"],"frozen":["x2"]}"#;

const PGL3_PAIR: &str = r#"{
  "symbols": ["e1", "e2", "e3", "f1", "f2", "f3", "k1", "k2"],
  "b1": [["k1*k2", "e1*k2", "e3"], ["0", "k2", "e2"], ["0", "0", "1"]],
  "b2": [["1/(k1*k2)", "0", "0"], ["f1/k2", "1/k2", "0"], ["f3", "f2", "1"]]
}"#;

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualgroup"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{}: {}", e, String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn mutate_pentagon_swaps_variables() {
    let dir = TempDir::new().unwrap();
    let seed = write(&dir, "a2.json", A2);
    let out = run(&[
        "mutate",
        "--seed",
        seed.to_str().unwrap(),
        "--sequence",
        "1,2,1,2,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["variables"], serde_json::json!(["x2", "x1"]));
    assert_eq!(v["epsilon_hat"][0][1], "-1/1");
}

#[test]
fn mutate_output_reads_back() {
    let dir = TempDir::new().unwrap();
    let seed = write(&dir, "a2.json", A2);
    let out = run(&[
        "mutate",
        "--seed",
        seed.to_str().unwrap(),
        "--sequence",
        "1",
    ]);
    let v = json(&out);
    assert_eq!(v["variables"], serde_json::json!(["1/x1", "x1*x2 + x2"]));
    let again = write(&dir, "mu1.json", &String::from_utf8(out.stdout).unwrap());
    let back = run(&[
        "mutate",
        "--seed",
        again.to_str().unwrap(),
        "--sequence",
        "1",
    ]);
    assert_eq!(
        json(&back)["epsilon_hat"],
        serde_json::json!([["0/1", "1/1"], ["-1/1", "0/1"]])
    );
}

#[test]
fn check_laurent_exit_codes() {
    let dir = TempDir::new().unwrap();
    let frozen = write(&dir, "a1f.json", A1_FROZEN);
    let member = run(&[
        "check-laurent",
        "--seed",
        frozen.to_str().unwrap(),
        "--expr",
        "x2*(1 + x1)",
    ]);
    assert_eq!(member.status.code(), Some(0));
    assert_eq!(json(&member)["member"], true);
    let a2 = write(&dir, "a2.json", A2);
    let non = run(&[
        "check-laurent",
        "--seed",
        a2.to_str().unwrap(),
        "--expr",
        "(1 + x2)/x1",
    ]);
    assert_eq!(non.status.code(), Some(1));
    assert_eq!(json(&non)["witness"], "mu1");
    let unknown = run(&[
        "check-laurent",
        "--seed",
        a2.to_str().unwrap(),
        "--expr",
        "y + 1",
    ]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn green_search_on_a2_and_disk() {
    let dir = TempDir::new().unwrap();
    let a2 = write(&dir, "a2.json", A2);
    let out = run(&[
        "green-search",
        "--seed",
        a2.to_str().unwrap(),
        "--budget",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["found"], true);
    assert_eq!(v["length"], 2);
    let quiver = run(&["build-quiver", "--shape", "punctured-disk", "--rank", "1"]);
    let q = write(
        &dir,
        "disk.json",
        &String::from_utf8(quiver.stdout).unwrap(),
    );
    let disk = run(&["green-search", "--quiver", q.to_str().unwrap()]);
    assert_eq!(disk.status.code(), Some(0));
    assert_eq!(json(&disk)["length"], 2);
}

#[test]
fn build_quiver_counts() {
    let tri = run(&["build-quiver", "--shape", "triangle", "--rank", "3"]);
    assert_eq!(json(&tri)["vertices"].as_array().unwrap().len(), 12);
    assert_eq!(json(&tri)["arrows"].as_array().unwrap().len(), 24);
    let disk = run(&[
        "build-quiver",
        "--shape",
        "punctured-disk",
        "--rank",
        "1",
        "--as-seed",
    ]);
    let v = json(&disk);
    assert_eq!((v["n"].as_u64(), v["m"].as_u64()), (Some(4), Some(2)));
    assert_eq!(
        run(&["build-quiver", "--shape", "triangle", "--rank", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn braid_symbolic_relation_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let pair = write(&dir, "pair.json", PGL3_PAIR);
    let p = pair.to_str().unwrap();
    let a = run(&[
        "braid",
        "--group",
        "pgl3",
        "--word",
        "1,2,1",
        "--input",
        p,
        "--symbolic",
    ]);
    let b = run(&[
        "braid",
        "--group",
        "pgl3",
        "--word",
        "2,1,2",
        "--input",
        p,
        "--symbolic",
    ]);
    assert_eq!(a.status.code(), Some(0));
    let (va, vb) = (json(&a), json(&b));
    assert_eq!(va["b1"], vb["b1"]);
    assert_eq!(va["b2"], vb["b2"]);
    assert_eq!(va["in_dual_group"], true);
    let s1 = json(&run(&[
        "braid",
        "--group",
        "pgl3",
        "--word",
        "1",
        "--input",
        p,
        "--symbolic",
    ]));
    assert_eq!(s1["b2"][2][1], "f1*f2 - f3");
    let wrong_size = run(&[
        "braid",
        "--group",
        "sl2",
        "--word",
        "1",
        "--input",
        p,
        "--symbolic",
    ]);
    assert_eq!(wrong_size.status.code(), Some(2));
    let bad_root = run(&[
        "braid",
        "--group",
        "pgl3",
        "--word",
        "3",
        "--input",
        p,
        "--symbolic",
    ]);
    assert_eq!(bad_root.status.code(), Some(2));
}

#[test]
fn braid_rational_pair() {
    let dir = TempDir::new().unwrap();
    let pair = write(
        &dir,
        "sl2.json",
        r#"{"b1": [["2", "3"], ["0", "1/2"]], "b2": [["1/2", "0"], ["5", "2"]]}"#,
    );
    let out = run(&[
        "braid",
        "--group",
        "sl2",
        "--word",
        "1",
        "--input",
        pair.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    // by hand: chi = 6, chi_minus = 5/2
    assert_eq!(v["b1"], serde_json::json!([["1/2", "5/4"], ["0/1", "2/1"]]));
    assert_eq!(
        v["b2"],
        serde_json::json!([["2/1", "0/1"], ["12/1", "1/2"]])
    );
    assert_eq!(v["in_dual_group"], true);
}

#[test]
fn randomized_runs_are_deterministic() {
    let a = run(&[
        "braid",
        "--group",
        "sl3",
        "--word",
        "1",
        "--samples",
        "10",
        "--rng-seed",
        "5",
    ]);
    let b = run(&[
        "--threads",
        "2",
        "braid",
        "--group",
        "sl3",
        "--word",
        "1",
        "--samples",
        "10",
        "--rng-seed",
        "5",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify-paper", "--section", "2.1", "--samples", "3"]);
    let d = run(&["verify-paper", "--section", "2.1", "--samples", "3"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn quantum_check_report() {
    let dir = TempDir::new().unwrap();
    let seed = write(&dir, "a2.json", A2);
    let out = run(&[
        "quantum-check",
        "--seed",
        seed.to_str().unwrap(),
        "--direction",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["relations"][0]["eps_hat"], "-1/1");
    let frozen = write(&dir, "a1f.json", A1_FROZEN);
    assert_eq!(
        run(&[
            "quantum-check",
            "--seed",
            frozen.to_str().unwrap(),
            "--direction",
            "2"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn uqsl2_expand_ef() {
    let out = run(&["uqsl2", "expand", "--expr", "E*F"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        v["coefficients"]["E(0,0,1)"]["terms"],
        serde_json::json!({"0": "1"})
    );
    assert_eq!(
        v["coefficients"]["E(0,-1,0)"]["terms"],
        serde_json::json!({"2": "1"})
    );
    assert_eq!(
        v["coefficients"]["E(0,1,0)"]["terms"],
        serde_json::json!({"-2": "1"})
    );
    assert_eq!(v["positive"], true);
    assert_eq!(
        run(&["uqsl2", "expand", "--expr", "E*"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["uqsl2", "expand", "--expr", "E*F", "--bound", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_paper_section() {
    let out = run(&["verify-paper", "--section", "4.3", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Example 4.3 σ₁: PASS"), "{}", text);
    assert!(!text.contains("Figure 1"));
    assert_eq!(
        run(&["verify-paper", "--section", "9.9"]).status.code(),
        Some(2)
    );
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", "{\"n\": 2");
    assert_eq!(
        run(&[
            "mutate",
            "--seed",
            broken.to_str().unwrap(),
            "--sequence",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    let a2 = write(&dir, "a2.json", A2);
    assert_eq!(
        run(&["mutate", "--seed", a2.to_str().unwrap(), "--sequence", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["mutate", "--seed", a2.to_str().unwrap(), "--sequence", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
