use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn extcalc(args: &[&str], env: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_extcalc"));
    c.args(args).env_remove("EXTCALC_LIMITS");
    if let Some(e) = env {
        c.env("EXTCALC_LIMITS", e);
    }
    c.output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn valid_sequence_exits_zero() {
    let o = extcalc(&["ses", "validate", &data("z4_over_z2.json")], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["exact"], true);
    assert!(String::from_utf8_lossy(&o.stderr).contains("elapsed"));
}

#[test]
fn validation_failures_exit_three() {
    let o = extcalc(&["ses", "validate", &data("not_exact.json")], None);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["exact"], false);

    let o = extcalc(&["algebra", "validate", &data("bad_table.json")], None);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["violation"]["equation"], "mul(x, inv(x)) = 0");

    let o = extcalc(&["algebra", "validate", &data("not_associative.json")], None);
    assert_eq!(o.status.code(), Some(3));
    let v = json(&o)["violation"].clone();
    assert_eq!(v["equation"], "add(add(x, y), z) = add(x, add(y, z))");
    assert_eq!(v["assignment"], serde_json::json!([1, 1, 2]));
}

#[test]
fn unreadable_input_exits_two() {
    let o = extcalc(&["ses", "canon", &data("missing.json")], None);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"]["kind"], "parse-error");

    let o = extcalc(&["algebra", "show", "Z0x"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn node_budget_exits_four() {
    let args = ["ses", "enum", "--variety", "groups", "--K", "Z2", "--Q", "Klein"];
    let o = extcalc(&[&args[..], &["--limits-nodes", "5"]].concat(), None);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(json(&o)["error"]["kind"], "limits-exceeded");

    // The environment sets the budget, a flag overrides it.
    let o = extcalc(&args, Some("nodes=5"));
    assert_eq!(o.status.code(), Some(4));
    let o = extcalc(&[&args[..], &["--limits-nodes", "1000000"]].concat(), Some("nodes=5"));
    assert_eq!(o.status.code(), Some(0));
    // Central extensions of Klein by Z2: H^2(Z2 x Z2, Z2) has order 8.
    assert_eq!(json(&o)["count"], 8);
}

#[test]
fn carrier_limit_exits_four() {
    let o = extcalc(&["algebra", "validate", &data("s3.json"), "--limits-carrier", "4"], None);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn bad_limits_are_usage_errors() {
    let o = extcalc(&["algebra", "show", "Z2", "--workers", "0"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = extcalc(&["algebra", "show", "Z2"], Some("speed=3"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn equivalence_verdicts() {
    let a = data("z4_over_z2.json");
    let o = extcalc(&["ses", "equiv", &a, &data("z4_over_z2_relabeled.json")], None);
    assert_eq!(json(&o)["verdict"], "equivalent");
    let o = extcalc(&["ses", "equiv", &a, &data("klein_over_z2.json")], None);
    assert_eq!(json(&o)["verdict"], "inequivalent");
}

#[test]
fn enumeration_summaries() {
    let o = extcalc(&["schreier", "enum", "--K", "Z2", "--Q", "Z2"], None);
    assert_eq!(json(&o)["summary"], "2 classes");
    let o = extcalc(&["ext", "classes", "--ring", "4", "--K", "Z2", "--Q", "Z2", "--n", "2"], None);
    let v = json(&o);
    assert_eq!(v["classes"], 2);
    assert_eq!(v["oracle_order"], 2);
}

#[test]
fn random_output_reloads() {
    let o = extcalc(&["ses", "random", "--variety", "groups", "--seed", "5"], None);
    let dir = std::env::temp_dir().join(format!("extcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("random.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let o = extcalc(&["ses", "validate", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn table_format() {
    let o = extcalc(&["schreier", "check", &data("monoid_z4_over_z2.json"), "--format", "table"], None);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l == "schreier: true"), "{text}");
}

#[test]
fn decompose_roundtrips() {
    let o = extcalc(&["threebythree", "decompose", &data("diagram.json")], None);
    assert_eq!(json(&o)["roundtrip"], true);
}
