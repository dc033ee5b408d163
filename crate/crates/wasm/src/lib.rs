//! wasm-bindgen entry points for the demo page. Each returns a JSON string;
//! errors come back as `{"error": "..."}` rather than exceptions.
//!
//! Timing and threads are left to the page: nothing here touches
//! `Instant` or spawns workers, so the same code runs natively in tests.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use thetaq::exact::{int, Coefficient, Rational};
use thetaq::identities::{
    half_sum, tangent_square_value, tangent_sum_circulated_form, tangent_sum_closed_form,
    theorem_rhs, HalfSumSpec,
};
use thetaq::modular::{log_deriv_lambert, theta2_jet, ThetaPoint};
use thetaq::qexp::{Comparison, QExpansion};

/// Largest k accepted from the page, to keep the tab responsive.
pub const K_LIMIT: u64 = 40;
/// Largest order accepted from the page.
pub const ORDER_LIMIT: u64 = 300;

fn coefficients<F: Coefficient + std::fmt::Display>(s: &QExpansion<F>, n: usize) -> Vec<String> {
    (0..n)
        .map(|i| s.coeff_at_offset(s.base(), i).to_string())
        .collect()
}

fn comparison<F: Coefficient + std::fmt::Display>(
    lhs: &QExpansion<F>,
    rhs: &QExpansion<F>,
    order: u64,
) -> thetaq::Result<Value> {
    Ok(match lhs.equal_to(rhs, &int(order as i64))? {
        Comparison::Equal => Value::Null,
        Comparison::Differs(m) => json!({
            "exponent": m.exponent.to_string(),
            "lhs": m.lhs.to_string(),
            "rhs": m.rhs.to_string(),
        }),
    })
}

fn check_range(k: u64, order: u64) -> Result<(), String> {
    if !(1..=K_LIMIT).contains(&k) {
        return Err(format!("k must be between 1 and {K_LIMIT}"));
    }
    if !(1..=ORDER_LIMIT).contains(&order) {
        return Err(format!("order must be between 1 and {ORDER_LIMIT}"));
    }
    Ok(())
}

fn render(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Half sum against the η side for one (k, δ), with the first `show`
/// coefficients of each.
pub fn half_sum_report(k: u64, delta: u8, order: u64, show: usize) -> Result<Value, String> {
    check_range(k, order)?;
    let spec = HalfSumSpec::new(k, delta).map_err(|e| e.to_string())?;
    let lhs = half_sum(spec, order).map_err(|e| e.to_string())?;
    let rhs = theorem_rhs(k, delta, order);
    let mismatch = comparison(&lhs, &rhs, order).map_err(|e| e.to_string())?;
    let show = show.min(order as usize);
    Ok(json!({
        "k": k,
        "delta": delta,
        "order": order,
        "indices": spec.indices(),
        "pass": mismatch.is_null(),
        "first_mismatch": mismatch,
        "lhs": coefficients(&lhs, show),
        "rhs": coefficients(&rhs, show),
    }))
}

/// Σ tan²(ℓπ/2k) over both residue classes for 1 ≤ k ≤ k_max.
pub fn tangent_rows(k_max: u64) -> Result<Value, String> {
    if !(1..=200).contains(&k_max) {
        return Err("k_max must be between 1 and 200".into());
    }
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let value = |d| tangent_square_value(k, d).map_err(|e| e.to_string());
        let (v0, v1): (Rational, Rational) = (value(0)?, value(1)?);
        rows.push(json!({
            "k": k,
            "delta0": v0.to_string(),
            "delta0_closed": tangent_sum_closed_form(k, 0).to_string(),
            "delta1": v1.to_string(),
            "delta1_closed": tangent_sum_closed_form(k, 1).to_string(),
            "delta1_circulated": tangent_sum_circulated_form(k, 1).to_string(),
        }));
    }
    Ok(Value::Array(rows))
}

/// ∂z log θ₂ at ℓπ/2k two ways: the Lambert form and the jet ratio a₁/a₀.
pub fn lambert_report(l: i64, k: u64, order: u64, show: usize) -> Result<Value, String> {
    check_range(k, order)?;
    if !(0..2 * k as i64).contains(&l) {
        return Err(format!("l must be in 0..{}", 2 * k));
    }
    let lambert = log_deriv_lambert(l, k, order).map_err(|e| e.to_string())?;
    let pt = ThetaPoint::new(l, 2 * k, 1, 4 * k).map_err(|e| e.to_string())?;
    let jet = theta2_jet(&pt, 1, order);
    let ratio = jet.coeff(1).div(jet.coeff(0)).map_err(|e| e.to_string())?;
    let mismatch = comparison(&ratio, &lambert, order).map_err(|e| e.to_string())?;
    let show = show.min(order as usize);
    Ok(json!({
        "l": l,
        "k": k,
        "order": order,
        "field": format!("Q(zeta{})", 4 * k),
        "pass": mismatch.is_null(),
        "first_mismatch": mismatch,
        "lambert": coefficients(&lambert, show),
        "jet_ratio": coefficients(&ratio, show),
    }))
}

#[wasm_bindgen(js_name = halfSum)]
pub fn half_sum_json(k: u32, delta: u8, order: u32, show: u32) -> String {
    render(half_sum_report(
        k.into(),
        delta,
        order.into(),
        show as usize,
    ))
}

#[wasm_bindgen(js_name = tangentTable)]
pub fn tangent_table_json(k_max: u32) -> String {
    render(tangent_rows(k_max.into()))
}

#[wasm_bindgen(js_name = lambertVsJet)]
pub fn lambert_vs_jet_json(l: i32, k: u32, order: u32, show: u32) -> String {
    render(lambert_report(
        l.into(),
        k.into(),
        order.into(),
        show as usize,
    ))
}
