use std::path::PathBuf;

use serde_json::Value;

use capreq::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("capreq").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn write_instance(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("capreq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const VAR_FILE: &str = r#"{
  "name": "var",
  "space": { "labels": ["E", "F", "G"], "probs": ["1/4", "1/4", "1/2"] },
  "assets": [ { "payoff": [1, 1, 1], "price": 1 }, { "payoff": [1, 0, -1], "price": 0 } ],
  "acceptance": { "type": "var", "alpha": "1/4" },
  "positions": { "shock": ["0", "-1/5", "0"] },
  "probes": [ { "base": [0, 0, 0], "direction": [0, -1, 0] },
              { "base": [0, 0, 0], "direction": [0, -1, 0], "epsilon": "1/10" } ]
}"#;

#[test]
fn rho_on_fixtures() {
    assert_eq!(
        json(&["rho", "--fixture", "p2_var_lsc", "--position", "0"])["value"],
        "0"
    );
    assert_eq!(
        json(&["rho", "--fixture", "p1_r3_unique", "--position", "0"])["value"],
        "-1/6"
    );
    let v = json(&["rho", "--fixture", "p3_star2d", "--position", "0"]);
    assert_eq!(v["value"], "-1");
    assert_eq!(v["attained"], false);
}

#[test]
fn optimal_sets_on_fixtures() {
    let v = json(&["optimal-set", "--fixture", "p2_var_lsc", "--position", "0"]);
    assert_eq!(v["vertices"], serde_json::json!([["0", "0"]]));
    assert_eq!(v["rays"], serde_json::json!([["0", "-1"]]));
    assert_eq!(v["payoffs"]["rays"], serde_json::json!([["-1", "0", "1"]]));
    let e = json(&["optimal-set", "--fixture", "p3_star2d", "--position", "0"]);
    assert_eq!(e["status"], "Empty");
    let eps = json(&[
        "epsilon-set",
        "--fixture",
        "p2_var_lsc",
        "--position",
        "0",
        "--eps",
        "1/10",
    ]);
    assert_eq!(eps["status"], "Nonempty");
}

#[test]
fn diagnose_reports() {
    let p1 = json(&["diagnose", "--fixture", "p1_r3_unique", "--samples", "20"]);
    assert_eq!(p1["existence"]["verdict"], "AllExist");
    assert_eq!(p1["usc"]["verdict"], "USC");
    assert_eq!(p1["uniqueness"]["falsification_witness"], Value::Null);
    let p2 = json(&["diagnose", "--fixture", "p2_var_lsc", "--samples", "20"]);
    assert_eq!(p2["usc"]["verdict"], "NotUSC");
    let p5 = json(&[
        "diagnose",
        "--fixture",
        "p5_staircase_trunc",
        "--samples",
        "20",
    ]);
    assert_eq!(p5["existence"]["verdict"], "PerPosition");
    assert_eq!(
        p5["optimal_set_at_zero"]["vertices"],
        serde_json::json!([["0", "0"]])
    );
}

#[test]
fn probes_print_csv_and_classification() {
    let (code, out, _) = call(&[
        "probe",
        "--fixture",
        "p2_var_lsc",
        "--base",
        "0",
        "--dir",
        "-1F",
        "--K",
        "6",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,t_k,deficit_lsc,deficit_outer");
    assert_eq!(lines[1], "0,1,10,0");
    let summary: Value = serde_json::from_str(lines[8]).unwrap();
    assert_eq!(summary["classification"], "ViolationWitness");
    assert_eq!(summary["delta"], "10");

    let v = json(&[
        "probe",
        "--fixture",
        "p2_var_lsc",
        "--dir",
        "-1F",
        "--eps",
        "1/10",
        "--K",
        "6",
        "--json",
        "--parallel",
    ]);
    assert_eq!(v["classification"], "ConsistentWithLsc");
    assert_eq!(v["hypotheses"]["interior_positive_payoff"], true);

    let p1 = json(&[
        "probe",
        "--fixture",
        "p1_r3_unique",
        "--base",
        "0",
        "--dir",
        "(1,0,0)",
        "--K",
        "6",
        "--json",
    ]);
    assert_eq!(p1["classification"], "ConsistentWithLsc");
}

#[test]
fn instance_files_with_named_positions_and_stored_probes() {
    let path = write_instance("var.json", VAR_FILE);
    let file = path.to_str().unwrap();
    let v = json(&["optimal-set", "--file", file, "--position", "shock"]);
    assert_eq!(v["vertices"], serde_json::json!([["0", "0"]]));
    assert_eq!(v["bounded"], true);
    let probes = json(&["probe", "--file", file, "--K", "4", "--json"]);
    let arr = probes.as_array().unwrap();
    assert_eq!(arr[0]["classification"], "ViolationWitness");
    assert_eq!(arr[1]["classification"], "ConsistentWithLsc");
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["rho", "--fixture", "nope"]).0, 2);
    assert_eq!(call(&["rho"]).0, 2);
    assert_eq!(
        call(&["rho", "--fixture", "p1_r3_unique", "--position", "(1,2)"]).0,
        2
    );
    assert_eq!(
        call(&["epsilon-set", "--fixture", "p2_var_lsc", "--eps", "0"]).0,
        2
    );
    assert_eq!(call(&["frobnicate"]).0, 2);

    let no_unit = write_instance(
        "no-unit.json",
        r#"{"space":{"probs":["1/2","1/2"]},"assets":[{"payoff":[1,-1],"price":1}],"acceptance":{"type":"scenario","event":[0]}}"#,
    );
    assert_eq!(call(&["rho", "--file", no_unit.to_str().unwrap()]).0, 3);

    let arbitrage = write_instance(
        "arbitrage.json",
        r#"{"space":{"probs":["1/2","1/2"]},
            "assets":[{"payoff":[1,1],"price":1},{"payoff":[1,0],"price":-1}],
            "acceptance":{"type":"polyhedral","rows":[{"phi":[1,0],"rhs":0}]}}"#,
    );
    let (code, _, err) = call(&["rho", "--file", arbitrage.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert!(err.contains("arbitrage"));

    let float = write_instance(
        "float.json",
        r#"{"space":{"probs":[0.5,0.5]},"assets":[{"payoff":[1,1],"price":1}],"acceptance":{"type":"scenario","event":[0]}}"#,
    );
    assert_eq!(call(&["rho", "--file", float.to_str().unwrap()]).0, 2);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "optimal-set",
        "--fixture",
        "p1_r3_unique",
        "--position",
        "(1/3,-2,5/7)",
        "--decimals",
        "4",
    ];
    let (a, b) = (call(&args), call(&args));
    assert_eq!(a.1, b.1);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert!(v["vertices_decimal"].is_array());
    assert!(v["rho_decimal"].is_string());
}

#[test]
fn paper_examples_subset() {
    let (code, out, _) = call(&["paper-examples", "--only", "p4_es_cash"]);
    assert_eq!(code, 0);
    assert!(
        out.ends_with("1 fixtures, 5 assertions, 0 failures\n"),
        "{out}"
    );
    let v = json(&["paper-examples", "--only", "p3_star2d", "--json"]);
    assert_eq!(v["failures"], 0);
    assert_eq!(call(&["paper-examples", "--only", "p9"]).0, 2);
}
