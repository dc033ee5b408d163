use serde_json::Value;
use thetaq_wasm::{half_sum_json, lambert_vs_jet_json, tangent_table_json};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).expect("valid json")
}

#[test]
fn half_sum_matches() {
    let v = parse(half_sum_json(5, 0, 40, 6));
    assert_eq!(v["pass"], true);
    assert_eq!(v["indices"], serde_json::json!([1, 3]));
    assert_eq!(v["lhs"], v["rhs"]);
    assert_eq!(v["lhs"][0], "2");
    assert!(v["first_mismatch"].is_null());
}

#[test]
fn tangent_table_rows() {
    let v = parse(tangent_table_json(4));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[2]["delta0"], "1/3");
    assert_eq!(rows[2]["delta1"], "3");
    assert_eq!(rows[2]["delta1_closed"], "3");
    assert_eq!(rows[2]["delta1_circulated"], "1");
    for r in rows {
        assert_eq!(r["delta0"], r["delta0_closed"]);
        assert_eq!(r["delta1"], r["delta1_closed"]);
    }
}

#[test]
fn lambert_agrees_with_jet() {
    let v = parse(lambert_vs_jet_json(3, 5, 30, 4));
    assert_eq!(v["pass"], true);
    assert_eq!(v["lambert"], v["jet_ratio"]);
    assert_eq!(v["field"], "Q(zeta20)");
}

#[test]
fn bad_input_is_an_error_object() {
    assert!(parse(half_sum_json(0, 0, 10, 3))["error"].is_string());
    assert!(parse(half_sum_json(3, 0, 100_000, 3))["error"].is_string());
    assert!(parse(lambert_vs_jet_json(5, 5, 10, 3))["error"].is_string());
    assert!(parse(lambert_vs_jet_json(-1, 5, 10, 3))["error"].is_string());
    assert!(parse(tangent_table_json(0))["error"].is_string());
}
