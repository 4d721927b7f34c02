use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn submax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_submax"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = submax(&a);
    let v = serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)));
    (code(&o), v)
}

fn temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn lwv_trace_ratio() {
    let (c, v) = json(&["lwv", "--module", "A2tr", "--n", "3", "--m", "2"]);
    assert_eq!(c, 0);
    let r = &v["results"][0];
    assert_eq!(r["alpha_over_beta"], "-6/5");
    assert_eq!(r["matches_closed_form"], true);
    assert!(r["coefficient_table"].is_object() || r["coefficient_table"].is_array());
    assert!(r["pretty"].as_str().unwrap().contains('⊗'));
}

#[test]
fn dims_rows() {
    let (c, v) = json(&["dims", "--n", "2", "--m", "2"]);
    assert_eq!(c, 0);
    let rows = v["results"].as_array().unwrap();
    let labels: Vec<&str> = rows.iter().map(|r| r["module"].as_str().unwrap()).collect();
    assert_eq!(labels, ["B4", "A2tf"]);
    assert!(rows
        .iter()
        .all(|r| r["bound"] == 11 && r["max_dim"] == 13 && r["rigid"] == false));
    let (c, v) = json(&["dims", "--n", "3..4", "--m", "3", "--verify"]);
    assert_eq!(c, 0);
    assert!(v["results"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["bound"] == r["computed_bound"]));
}

#[test]
fn invariants_of_tracefree_model() {
    let (c, v) = json(&["invariants", "--model", "A2tf", "--n", "4", "--m", "2"]);
    assert_eq!(c, 0);
    let r = &v["results"][0];
    assert_eq!(r["verdicts"]["A2tf"], "nonzero");
    assert_eq!(r["verdicts"]["A2tr"], "zero");
    assert_eq!(r["nonvanishing"], serde_json::json!(["A2tf"]));
}

#[test]
fn invariants_from_file() {
    let f = temp("# trace model\nn=3 m=2\nu[4]^1 = 4/3*u[3]^1*u[3]^1/u[2]^1\nu[4]^2 = 4/3*u[3]^1*u[3]^2/u[2]^1\n");
    let (c, v) = json(&["invariants", "--ode", f.path().to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["results"][0]["nonvanishing"], serde_json::json!(["A2tr"]));
    let bad = temp("n=3 m=2\nu[4]^1 = u[3]^1 +\n");
    assert_eq!(
        code(&submax(&[
            "invariants",
            "--ode",
            bad.path().to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn model_parameters() {
    let (c, v) = json(&[
        "model",
        "--module",
        "A2tr",
        "--n",
        "3",
        "--m",
        "2",
        "--solve-params",
        "--verify",
    ]);
    assert_eq!(c, 0);
    let r = &v["results"][0];
    assert_eq!(r["solved_parameters"]["mu3"], "-2/1");
    assert_eq!(r["solved_parameters"]["zeta"], "-2/5");
    assert_eq!(r["parameters_match_closed_form"], true);
    let (c, v) = json(&[
        "model", "--module", "B4", "--n", "2", "--m", "3", "--branch", "minus", "--verify",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["results"][0]["branch"], "minus");
}

#[test]
fn symmetry_checks() {
    let (c, v) = json(&[
        "symmetry", "--model", "B4", "--n", "2", "--m", "2", "--branch", "minus",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["results"][0]["span_dim"], 11);
    assert_eq!(v["results"][0]["closed"], true);

    let good = temp("tau = t\n\nphi^1 = 1\n");
    let args = [
        "symmetry", "--model", "B4", "--n", "2", "--m", "2", "--fields",
    ];
    let mut a = args.to_vec();
    a.push(good.path().to_str().unwrap());
    assert_eq!(code(&submax(&a)), 0);

    let bad = temp("# not a symmetry\nphi^1 = t^2\n");
    let mut a = args.to_vec();
    a.push(bad.path().to_str().unwrap());
    let o = submax(&a);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("NOT symmetry"));
}

#[test]
fn structure_text_table() {
    let o = submax(&["structure", "--n", "2..3", "--m", "2"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.starts_with("n  m  dim"));
    assert!(out.contains("3  2  15"));
    assert!(out.trim_end().ends_with("structure: PASS"));
}

#[test]
fn annihilator_listing() {
    let (c, v) = json(&["ann", "--module", "B4", "--n", "2", "--m", "3"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"][0]["passed"], true);
}

#[test]
fn usage_errors() {
    for args in [
        &["lwv", "--module", "A2tr", "--n", "2", "--m", "2"][..],
        &["lwv", "--module", "C9", "--n", "3", "--m", "2"],
        &["structure", "--n", "11", "--m", "2"],
        &["structure", "--n", "1", "--m", "2"],
        &["dims", "--n", "5..2", "--m", "2"],
        &["invariants", "--model", "B4"],
        &["invariants", "--ode", "/nonexistent/file"],
        &["reproduce-paper", "--criteria", "11"],
        &["frobnicate"],
    ] {
        assert_eq!(code(&submax(args)), 2, "{args:?}");
    }
    assert_eq!(
        code(&submax(&[
            "structure",
            "--n",
            "11",
            "--m",
            "2",
            "--max-n",
            "11"
        ])),
        0
    );
}

#[test]
fn deterministic_output() {
    let args = [
        "invariants",
        "--model",
        "B4",
        "--n",
        "2",
        "--m",
        "3",
        "--format",
        "json",
    ];
    assert_eq!(submax(&args).stdout, submax(&args).stdout);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dims.json");
    let o = submax(&[
        "dims",
        "--n",
        "3",
        "--m",
        "2",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["command"], "dims");
}

#[test]
fn reproduce_subset() {
    let (c, v) = json(&["reproduce-paper", "--criteria", "1,7"]);
    assert_eq!(c, 0);
    let keys: Vec<&str> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["key"].as_str().unwrap())
        .collect();
    assert_eq!(keys, ["structure", "module-dims"]);
}
