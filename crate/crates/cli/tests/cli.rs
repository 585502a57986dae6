use std::process::{Command, Output};

use serde_json::Value;

fn scatterlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scatterlab")).args(args).env_remove("SCATTERLAB_MAX_FIELD").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn pseudoregulus_over_f8_is_scattered() {
    let out = scatterlab(&["test", "--field", "2^[3]", "--ell", "0", "--poly", "pseudoregulus:s=1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["scattered"], true);
    assert_eq!(v["command"], "test");
}

#[test]
fn non_coprime_pseudoregulus_is_not_scattered() {
    let out = scatterlab(&["test", "--field", "2^[4]", "--ell", "0", "--poly", "pseudoregulus:s=2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["result"]["scattered"], false);
    assert_eq!(v["result"]["runs"][0]["witness"]["kind"], "kernel");
}

#[test]
fn malformed_polynomial_exits_with_a_diagnostic() {
    let out = scatterlab(&["test", "--field", "2^[3]", "--ell", "0", "--poly", "coeffs=[[0],[1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1, column"), "{err}");
    let v = json(&out);
    assert!(v["result"]["error"].as_str().unwrap().contains("column"));
}

#[test]
fn malformed_field_exits_2() {
    let out = scatterlab(&["test", "--field", "2^3", "--ell", "0", "--poly", "pseudoregulus:s=1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = scatterlab(&["test", "--field", "6^[1]", "--ell", "0", "--poly", "pseudoregulus:s=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_2() {
    assert_eq!(scatterlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn envelope_schema() {
    let v = json(&scatterlab(&["--jobs", "2", "sieve", "--q", "2", "--d", "3"]));
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["command", "config", "elapsed_ms", "result", "tool", "version"]);
    assert_eq!(v["tool"], "scatterlab");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["elapsed_ms"].is_u64());
    assert!(v["config"].get("jobs").is_none());
    assert_eq!(v["config"]["command"]["sieve"]["q"], "2");
}

#[test]
fn odd_sieve_table() {
    let out = scatterlab(&["sieve", "--q", "3", "--d", "3..11", "--odd-only"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["counts"]["unresolved"], 0);
    for row in v["result"]["rows"].as_array().unwrap() {
        assert!(row["d"].as_u64().unwrap() % 2 == 1);
        assert!(row["outcome"] == "excluded" || row["outcome"] == "monomial_branch", "{row}");
    }
}

#[test]
fn sieve_csv() {
    let out = scatterlab(&["sieve", "--q", "2", "--d", "4", "--kind", "spread", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "q,d,k,ell,branch,quantity,bound,divisor,outcome,excluded_by_orbit_argument");
    let survivors: Vec<&str> = lines.filter(|l| l.contains("survivor")).collect();
    assert_eq!(survivors.len(), 1);
    assert!(survivors[0].starts_with("2,4,4,2,"));
}

#[test]
fn embed_prints_the_frobenius_block_matrix() {
    let v = json(&scatterlab(&["embed", "--q", "2", "--m", "2", "--n", "2", "--show", "M"]));
    let expected: Value = serde_json::from_str("[[[1],[1],[0],[0]],[[0],[1],[0],[0]],[[0],[0],[1],[1]],[[0],[0],[0],[1]]]").unwrap();
    assert_eq!(v["result"]["M"], expected);
    let v = json(&scatterlab(&["embed", "--q", "2", "--m", "2", "--n", "2", "--show", "mbar"]));
    assert_eq!(v["result"]["mbar"], serde_json::json!([[[1], [1]], [[0], [1]]]));
}

#[test]
fn embed_has_no_csv_form() {
    let out = scatterlab(&["embed", "--q", "2", "--m", "2", "--n", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn symplectic_certificate_batch() {
    let out = scatterlab(&["certify", "sp", "--q", "2", "--e", "4", "--d", "8", "--samples", "200", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["verified"], 200);
    assert_eq!(v["result"]["failures"], 0);
    assert!(v["result"]["max_rank"].as_u64().unwrap() <= 6);
    let cert = &v["result"]["certificates"][0];
    for k in ["kind", "input", "companion", "rank", "bound", "verified"] {
        assert!(cert.get(k).is_some(), "{k}");
    }
    assert_eq!(v["result"]["params"]["seed"], 7);
}

#[test]
fn search_is_identical_across_worker_counts() {
    let base = ["search", "--field", "2^[4]", "--ell", "0..3", "--k-max", "3", "--reproducible"];
    let one = scatterlab(&[&["--jobs", "1"][..], &base[..]].concat());
    let eight = scatterlab(&[&["--jobs", "8"][..], &base[..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, eight.stdout);
    let v = json(&one);
    assert_eq!(v["result"]["determinism_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("scatterlab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("families.json");
    let out = scatterlab(&["families", "--field", "3^[3]", "--test", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "families");
    assert_eq!(v["result"]["conditions_hold_but_not_scattered"], 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn max_field_environment_variable_is_honoured() {
    let run = |bound: &str| {
        Command::new(env!("CARGO_BIN_EXE_scatterlab"))
            .args(["test", "--field", "2^[6]", "--ell", "0", "--poly", "pseudoregulus:s=1"])
            .env("SCATTERLAB_MAX_FIELD", bound)
            .output()
            .unwrap()
    };
    assert_eq!(run("32").status.code(), Some(2));
    assert_eq!(run("64").status.code(), Some(0));
    assert_eq!(run("lots").status.code(), Some(2));
}

#[test]
fn probe_marks_truncation() {
    let out = Command::new(env!("CARGO_BIN_EXE_scatterlab"))
        .args(["probe", "--field", "2^[3]", "--poly", "pseudoregulus:s=1", "--depth", "4"])
        .env("SCATTERLAB_MAX_FIELD", "4096")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["result"]["truncated"], false);
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 4);
    let out = Command::new(env!("CARGO_BIN_EXE_scatterlab"))
        .args(["probe", "--field", "2^[3]", "--poly", "pseudoregulus:s=1", "--depth", "5"])
        .env("SCATTERLAB_MAX_FIELD", "4096")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["result"]["truncated"], true);
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 4);
}
