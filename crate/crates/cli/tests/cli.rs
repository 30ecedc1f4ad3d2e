use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let Output { status, stdout, .. } = Command::new(env!("CARGO_BIN_EXE_arrovian"))
        .args(args)
        .output()
        .expect("binary runs");
    let v = serde_json::from_slice(&stdout).expect("stdout is JSON");
    (status.code().expect("exit code"), v)
}

#[test]
fn orders_enum_lists_thirteen_codes() {
    let (code, v) = run(&["orders", "enum", "--alts", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 13);
    assert_eq!(v["codes"].as_array().unwrap().len(), 13);
    let first = &v["orders"][0];
    assert_eq!(first["display"], "0 < 1 < 2");
    assert!(first["order"]["pairs"].as_array().unwrap().contains(&serde_json::json!([0, 2])));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bogus"]).0, 2);
    assert_eq!(run(&["orders", "enum", "--alts", "9"]).0, 2);
    assert_eq!(run(&["arrow", "search", "--voters", "3"]).0, 2);
    assert_eq!(run(&["swf", "eval", "--provenance", "nobody", "--profile-index", "0"]).0, 2);
}

#[test]
fn arrow_linear_is_dictatorial() {
    let (code, v) = run(&["arrow", "search", "--voters", "2", "--alts", "3", "--domain", "linear"]);
    assert_eq!(code, 0);
    assert!(v["survivor_count"].as_u64().unwrap() >= 2);
    assert!(v["non_dictatorial"].as_array().unwrap().is_empty());
    assert!(v["survivors"].as_array().unwrap().iter().all(|s| !s["dictator"].is_null()));
    let (_, alias) = run(&["arrowcheck", "search", "--domain", "linear"]);
    assert_eq!(alias, v);
}

#[test]
fn jobs_do_not_change_output() {
    let (_, one) = run(&["arrow", "search", "--domain", "weak", "--verify", "false"]);
    let (_, four) = run(&["--jobs", "4", "arrow", "search", "--domain", "weak", "--verify", "false"]);
    assert_eq!(one, four);
    assert_eq!(one["non_dictatorial"].as_array().unwrap().len(), 0);
}

#[test]
fn society_embed_then_evaluate() {
    let soc = ["--kind", "finite-cofinite"];
    let mut args = vec!["society", "embed"];
    args.extend(soc);
    args.extend(["--pattern", "0 < 1 < *", "--pattern", "1 < 0 < *", "--cell", "set:3,5"]);
    let (code, v) = run(&args);
    assert_eq!(code, 0);
    let n = v["profile_index"].as_str().unwrap().to_string();
    assert_eq!(v["voters"][3]["order"], "0 < 1 < 2");
    assert_eq!(v["voters"][4]["order"], "1 < 0 < 2");

    let (_, mu) = run(&["society", "mu", "--kind", "finite-cofinite", "--profile-index", &n, "--x", "0", "--y", "1"]);
    assert_eq!(mu["mu_strict"]["normal_form"]["form"], "finite");
    assert_eq!(mu["mu_strict"]["members_below"], serde_json::json!([3, 5]));

    let (_, fr) = run(&["swf", "eval", "--kind", "finite-cofinite", "--provenance", "frechet", "--profile-index", &n]);
    assert_eq!(fr["order"]["display"], "1 < 0 < 2");
    let (_, dict) = run(&["swf", "eval", "--kind", "finite-cofinite", "--provenance", "dictator:5", "--profile-index", &n]);
    assert_eq!(dict["order"]["display"], "0 < 1 < 2");
}

#[test]
fn ks_extract_finds_the_point() {
    let (code, v) = run(&["ks", "extract", "--kind", "finite", "--voters", "3", "--provenance", "principal:1"]);
    assert_eq!(code, 0);
    assert_eq!(v["principal_point"], 1);
    assert_eq!(v["memberships"].as_array().unwrap().len(), 8);
    let (code, v) = run(&["ks", "extract", "--provenance", "frechet", "--report-below", "3"]);
    assert_eq!(code, 0);
    assert!(v["principal_point"].is_null());
}

#[test]
fn broken_table_exits_one_with_witness() {
    let dir = std::env::temp_dir().join(format!("arrovian-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.json");
    // constant output: violates unanimity
    let outputs = vec![Some(0usize); 169];
    let file = serde_json::json!({"domain": "weak", "outputs": outputs});
    std::fs::write(&path, file.to_string()).unwrap();
    let prov = format!("table:{}", path.display());
    let (code, v) = run(&["ks", "extract", "--kind", "finite", "--voters", "2", "--provenance", &prov]);
    assert_eq!(code, 1);
    assert!(!v["unanimity"]["witness"].is_null());
}

#[test]
fn reversal_reports_and_emits() {
    let dir = std::env::temp_dir().join(format!("arrovian-rev-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let h = dir.join("h.json");
    std::fs::write(&h, "[5]").unwrap();
    let emit = dir.join("report.json");
    let (code, v) = run(&[
        "reversal",
        "--h",
        h.to_str().unwrap(),
        "--n",
        "5",
        "--n",
        "7",
        "--stage-bound",
        "10",
        "--emit",
        emit.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["queries"][0]["outcome"], "in_range");
    assert_eq!(v["queries"][0]["stage"], 1);
    assert_eq!(v["queries"][1]["outcome"], "no_witness_up_to");
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&emit).unwrap()).unwrap();
    assert_eq!(written, v);
    let (_, zero) = run(&["reversal", "--h", h.to_str().unwrap(), "--n", "5", "--stage-bound", "0"]);
    assert_eq!(zero["queries"][0]["outcome"], "no_witness_up_to");
}

#[test]
fn schemas_cover_every_verb() {
    let (code, all) = run(&["--schema"]);
    assert_eq!(code, 0);
    for verb in ["orders", "society", "swf", "ks", "arrow", "fishburn", "reversal", "selftest"] {
        assert!(all[verb].is_object(), "{verb}");
    }
    let (_, one) = run(&["--schema", "reversal"]);
    assert_eq!(one, all["reversal"]);
}

#[test]
fn fishburn_demo_verifies() {
    let (code, v) = run(&["fishburn", "demo", "--k", "3", "--bound", "10", "--samples", "60", "--cofinite", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["nondictatorial"]["failures"], 0);
    assert_eq!(v["nondictatorial"]["single"].as_array().unwrap().len(), 10);
}
