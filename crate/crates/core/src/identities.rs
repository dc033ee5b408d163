//! Both sides of each identity, an exact comparison, and a report.
//!
//! Every `verify_*` function returns a [`VerificationReport`]; failures are
//! data. Arithmetic errors inside a check (a precision shortfall, a
//! non-rational half sum) also become failed reports, with the error text in
//! place of the left-hand coefficient.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use serde::ser::{Error as _, SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, rat, sum_tan_squared, Coefficient, Cyclotomic, CyclotomicField, Rational};
use crate::modular::{
    eta_log_ddq, eta_product, halfprod_constant, log_deriv_lambert, theta2_jet, theta2_series,
    ThetaPoint,
};
use crate::qexp::{divisors, lambert, Comparison, QExpansion};
use crate::zjet::ZJet;

/// The identities this crate can check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// Half sum of squared log-derivatives equals an η-quotient derivative.
    HalfSum,
    /// Lambert form of ∂z log θ₂ against the jet ratio a₁/a₀.
    LambertLogDerivative,
    /// Product of θ₂ over a residue class equals a scaled θ₂ at q^k.
    HalfProduct,
    /// (∂z log θ₂)² = T(log θ₂) as jets.
    SquareLaw,
    /// (8q∂q + ∂z²)θ₂ = 0 as jets.
    HeatEquation,
    /// θ₂(0, q) = 2η(2τ)²/η(τ).
    ThetaNull,
    /// θ₂(z - π/2, q)/z → 2η(τ)³.
    ThetaSlope,
    /// ∂z² log θ₂ at 0 as an η-derivative.
    CurvatureOrigin,
    /// ∂z² log of θ₂(kz - π/2, q^k)/θ₂(z - π/2, q) at 0.
    CurvatureRatio,
    /// T(log θ₂(kz, q^k)) at 0.
    TTheta,
    /// T of the log of the ratio above, at 0.
    TRatio,
    /// Σ tan²(ℓπ/2k) over the residue class.
    TangentSquares,
    /// The squared Lambert series identity for k = 3.
    K3Lambert,
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Identity::HalfSum => "half-sum",
            Identity::LambertLogDerivative => "lambert-log-derivative",
            Identity::HalfProduct => "half-product",
            Identity::SquareLaw => "square-law",
            Identity::HeatEquation => "heat-equation",
            Identity::ThetaNull => "theta-null",
            Identity::ThetaSlope => "theta-slope",
            Identity::CurvatureOrigin => "curvature-origin",
            Identity::CurvatureRatio => "curvature-ratio",
            Identity::TTheta => "t-theta",
            Identity::TRatio => "t-ratio",
            Identity::TangentSquares => "tangent-squares",
            Identity::K3Lambert => "k3-lambert",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of one check. Absent fields do not apply.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<i64>,
    /// Base point as "p/d", meaning pπ/d.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jet_degree: Option<usize>,
    pub order: u64,
}

impl Params {
    fn order(order: u64) -> Self {
        Params {
            order,
            ..Default::default()
        }
    }

    fn with_k(mut self, k: u64) -> Self {
        self.k = Some(k);
        self
    }

    fn with_delta(mut self, delta: u8) -> Self {
        self.delta = Some(delta);
        self
    }

    fn with_l(mut self, l: i64) -> Self {
        self.l = Some(l);
        self
    }

    fn with_point(mut self, num: i64, den: u64) -> Self {
        self.point = Some(format!("{num}/{den}"));
        self
    }

    fn with_degree(mut self, j: usize) -> Self {
        self.jet_degree = Some(j);
        self
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(k) = self.k {
            parts.push(format!("k={k}"));
        }
        if let Some(d) = self.delta {
            parts.push(format!("delta={d}"));
        }
        if let Some(l) = self.l {
            parts.push(format!("l={l}"));
        }
        if let Some(p) = &self.point {
            parts.push(format!("z0={p}*pi"));
        }
        if let Some(j) = self.jet_degree {
            parts.push(format!("J={j}"));
        }
        parts.push(format!("N={}", self.order));
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Where two sides first disagree; coefficients are rendered as text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MismatchRecord {
    pub exponent: Rational,
    /// Jet slot, for jet identities.
    pub slot: Option<usize>,
    pub lhs: String,
    pub rhs: String,
}

impl Serialize for MismatchRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MismatchRecord", 4)?;
        let num = self
            .exponent
            .numer()
            .to_i64()
            .ok_or_else(|| S::Error::custom("exponent overflow"))?;
        let den = self
            .exponent
            .denom()
            .to_i64()
            .ok_or_else(|| S::Error::custom("exponent overflow"))?;
        st.serialize_field("exponent_num", &num)?;
        st.serialize_field("exponent_den", &den)?;
        st.serialize_field("lhs", &self.lhs)?;
        st.serialize_field("rhs", &self.rhs)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub identity: Identity,
    pub params: Params,
    pub status: Status,
    pub first_mismatch: Option<MismatchRecord>,
    pub elapsed: Duration,
    /// Absolute exponent below which the two sides were compared.
    pub precision_certified: Rational,
    /// Free-form remark shown in text output only.
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VerificationReport", 6)?;
        st.serialize_field("identity", &self.identity)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("status", &self.status)?;
        st.serialize_field("first_mismatch", &self.first_mismatch)?;
        st.serialize_field("elapsed_ms", &(self.elapsed.as_secs_f64() * 1e3))?;
        st.serialize_field("order", &self.params.order)?;
        st.end()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(
            f,
            "{status} {:<24} {:<32} certified<{} {:>9.3}ms",
            self.identity.name(),
            self.params.to_string(),
            self.precision_certified,
            self.elapsed.as_secs_f64() * 1e3
        )?;
        if let Some(m) = &self.first_mismatch {
            write!(f, "\n     first mismatch at q^{}", m.exponent)?;
            if let Some(j) = m.slot {
                write!(f, " (z^{j})")?;
            }
            write!(f, ": lhs = {}, rhs = {}", m.lhs, m.rhs)?;
        }
        if let Some(n) = &self.note {
            write!(f, "\n     note: {n}")?;
        }
        Ok(())
    }
}

struct Outcome {
    mismatch: Option<MismatchRecord>,
    certified: Rational,
    note: Option<String>,
}

fn run_check(
    identity: Identity,
    params: Params,
    check: impl FnOnce() -> Result<Outcome>,
) -> VerificationReport {
    let start = Instant::now();
    let outcome = check().unwrap_or_else(|e| Outcome {
        mismatch: Some(MismatchRecord {
            exponent: int(0),
            slot: None,
            lhs: format!("error: {e}"),
            rhs: "-".into(),
        }),
        certified: int(0),
        note: None,
    });
    let elapsed = start.elapsed();
    let status = if outcome.mismatch.is_none() && outcome.certified >= int(params.order as i64) {
        Status::Pass
    } else {
        Status::Fail
    };
    VerificationReport {
        identity,
        params,
        status,
        first_mismatch: outcome.mismatch,
        elapsed,
        precision_certified: outcome.certified,
        note: outcome.note,
    }
}

// Compares over the full common precision, which must reach `order`.
fn compare<F: Coefficient + fmt::Display>(
    lhs: &QExpansion<F>,
    rhs: &QExpansion<F>,
    order: u64,
) -> Result<Outcome> {
    let common = lhs.precision().clone().min(rhs.precision().clone());
    let wanted = int(order as i64);
    if common < wanted {
        return Err(Error::InsufficientPrecision {
            available: common.to_string(),
            requested: wanted.to_string(),
        });
    }
    let mismatch = match lhs.equal_to(rhs, &common)? {
        Comparison::Equal => None,
        Comparison::Differs(m) => Some(MismatchRecord {
            exponent: m.exponent,
            slot: None,
            lhs: m.lhs.to_string(),
            rhs: m.rhs.to_string(),
        }),
    };
    Ok(Outcome {
        mismatch,
        certified: common,
        note: None,
    })
}

fn compare_jets<F: Coefficient + fmt::Display>(
    lhs: &ZJet<F>,
    rhs: &ZJet<F>,
    order: u64,
) -> Result<Outcome> {
    if lhs.degree() != rhs.degree() {
        return Err(Error::DegreeTooSmall {
            have: lhs.degree().min(rhs.degree()),
            need: lhs.degree().max(rhs.degree()),
        });
    }
    let mut certified: Option<Rational> = None;
    for (j, (a, b)) in lhs.coeffs().iter().zip(rhs.coeffs()).enumerate() {
        let mut out = compare(a, b, order)?;
        if let Some(m) = out.mismatch.as_mut() {
            m.slot = Some(j);
            return Ok(out);
        }
        certified = Some(match certified {
            None => out.certified,
            Some(c) => c.min(out.certified),
        });
    }
    Ok(Outcome {
        mismatch: None,
        certified: certified.expect("jets have a slot"),
        note: None,
    })
}

/// Σ w·q∂q log η(ατ) over `(w, α)`.
pub fn eta_log_combination(terms: &[(i64, u64)], order: u64) -> QExpansion<Rational> {
    let mut acc = QExpansion::zero((), int(0), int(order as i64));
    for &(w, alpha) in terms {
        if w != 0 {
            acc = acc
                .add(&eta_log_ddq(alpha, order).scale(&int(w)))
                .expect("rational series share a ring");
        }
    }
    acc
}

/// The residue class {0 ≤ ℓ < k : ℓ - k ≡ δ (mod 2)}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfSumSpec {
    pub k: u64,
    pub delta: u8,
}

impl HalfSumSpec {
    pub fn new(k: u64, delta: u8) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if delta > 1 {
            return Err(Error::InvalidArgument("delta must be 0 or 1".into()));
        }
        Ok(HalfSumSpec { k, delta })
    }

    pub fn indices(&self) -> Vec<i64> {
        residue_class(self.k, self.delta, self.k)
    }
}

// {0 ≤ ℓ < bound : ℓ - k ≡ δ (mod 2)}
fn residue_class(k: u64, delta: u8, bound: u64) -> Vec<i64> {
    (0..bound as i64)
        .filter(|l| (l - k as i64).rem_euclid(2) == i64::from(delta))
        .collect()
}

/// Σ_ℓ (∂z log θ₂(ℓπ/2k, q))² over the residue class, as a rational series.
pub fn half_sum(spec: HalfSumSpec, order: u64) -> Result<QExpansion<Rational>> {
    let field = CyclotomicField::new(4 * spec.k);
    let mut acc = QExpansion::zero(field, int(0), int(order as i64));
    for l in spec.indices() {
        let d = log_deriv_lambert(l, spec.k, order)?;
        acc = acc.add(&d.square())?;
    }
    acc.try_map((), |c: &Cyclotomic| {
        c.to_rational()
            .ok_or_else(|| Error::NotRational(format!("half sum coefficient {c}")))
    })
}

/// The η-quotient side:
/// δ = 0: `4(k-2)(E_k - E_1)`; δ = 1: `4((2k-2)E_{2k} - kE_1 - (k-2)E_k)`,
/// with `E_α = q∂q log η(ατ)`.
pub fn theorem_rhs(k: u64, delta: u8, order: u64) -> QExpansion<Rational> {
    let ki = k as i64;
    if delta == 0 {
        eta_log_combination(&[(4 * (ki - 2), k), (-4 * (ki - 2), 1)], order)
    } else {
        eta_log_combination(
            &[(4 * (2 * ki - 2), 2 * k), (-4 * ki, 1), (-4 * (ki - 2), k)],
            order,
        )
    }
}

pub fn verify_theorem(k: u64, delta: u8, order: u64) -> VerificationReport {
    let params = Params::order(order).with_k(k).with_delta(delta);
    run_check(Identity::HalfSum, params, || {
        let lhs = half_sum(HalfSumSpec::new(k, delta)?, order)?;
        compare(&lhs, &theorem_rhs(k, delta, order), order)
    })
}

/// Jet ratio a₁/a₀ at ℓπ/2k against the Lambert form, for one ℓ.
pub fn verify_lemd_at(l: i64, k: u64, order: u64) -> VerificationReport {
    let params = Params::order(order).with_k(k).with_l(l);
    run_check(Identity::LambertLogDerivative, params, || {
        let pt = ThetaPoint::new(l, 2 * k, 1, 4 * k)?;
        let jet = theta2_jet(&pt, 1, order);
        let ratio = jet.coeff(1).div(jet.coeff(0))?;
        let lambert_form = log_deriv_lambert(l, k, order)?;
        let mut out = compare(&ratio, &lambert_form, order)?;
        if out.mismatch.is_none() {
            if let Some((e, c)) = lambert_form.terms().find(|(_, c)| !c.is_real()) {
                out.mismatch = Some(MismatchRecord {
                    exponent: e,
                    slot: None,
                    lhs: c.to_string(),
                    rhs: c.conjugate().to_string(),
                });
                out.note = Some("coefficient not fixed by conjugation".into());
            }
        }
        Ok(out)
    })
}

/// One report per admissible ℓ in 0..2k.
pub fn verify_lemd(k: u64, order: u64) -> Vec<VerificationReport> {
    (0..2 * k as i64)
        .filter(|&l| l != k as i64)
        .map(|l| verify_lemd_at(l, k, order))
        .collect()
}

/// Base points used for the half-product check: z₀ = π/(8k) or π/(12k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfProductPoint {
    Eighth,
    Twelfth,
}

impl HalfProductPoint {
    fn step(self) -> u64 {
        match self {
            HalfProductPoint::Eighth => 4,
            HalfProductPoint::Twelfth => 6,
        }
    }
}

/// Both sides of the half-product formula at z₀ = π/(2·step·k):
/// Π θ₂(z₀ + ℓπ/2k, q) over 0 ≤ ℓ < 2k, ℓ - k ≡ δ, and
/// C·η(τ)^k/η(kτ)·θ₂(kz₀ + (δ-1)π/2, q^k).
pub fn half_product_sides(
    k: u64,
    delta: u8,
    at: HalfProductPoint,
    constant: &Cyclotomic,
    order: u64,
) -> Result<(QExpansion<Cyclotomic>, QExpansion<Cyclotomic>)> {
    let step = at.step();
    let den = 2 * step;
    let m = den * 2 * k;
    let field = CyclotomicField::new(m);
    let mut lhs = QExpansion::one(field.clone(), int(order as i64));
    for l in residue_class(k, delta, 2 * k) {
        let pt = ThetaPoint::new(1 + step as i64 * l, den * k, 1, m)?;
        lhs = lhs.mul(&theta2_series(&pt, order))?;
    }
    let rhs_pt = ThetaPoint::new(1 + step as i64 * (i64::from(delta) - 1), den, k, m)?;
    let theta = theta2_series(&rhs_pt, order);
    let eta_ratio = eta_product(1, order)
        .pow(k as u32)?
        .div(&eta_product(k, order))?;
    let eta_ratio = eta_ratio.try_map(field.clone(), |r| Ok(field.from_rational(r)))?;
    let rhs = eta_ratio.mul(&theta)?.mul_scalar(&constant.embed(m)?);
    Ok((lhs, rhs))
}

pub fn verify_lem2_at(k: u64, delta: u8, at: HalfProductPoint, order: u64) -> VerificationReport {
    let den = 2 * at.step() * k;
    let params = Params::order(order)
        .with_k(k)
        .with_delta(delta)
        .with_point(1, den);
    run_check(Identity::HalfProduct, params, || {
        let c = halfprod_constant(k, delta);
        let (lhs, rhs) = half_product_sides(k, delta, at, &c, order)?;
        compare(&lhs, &rhs, order)
    })
}

pub fn verify_lem2(k: u64, delta: u8, order: u64) -> VerificationReport {
    verify_lem2_at(k, delta, HalfProductPoint::Eighth, order)
}

/// Numerators j of the points jπ/(4k) used for the square law: the first
/// five with θ₂(jπ/4k) ≠ 0.
pub fn square_law_points(k: u64) -> Vec<i64> {
    (0..)
        .filter(|j| j % (4 * k as i64) != 2 * k as i64)
        .take(5)
        .collect()
}

fn square_law_point(j: i64, k: u64) -> Result<ThetaPoint> {
    ThetaPoint::new(j, 4 * k, 1, 8 * k)
}

/// (f'/f)² against T(log f) for f the θ₂ jet at jπ/(4k), both of degree J-2.
pub fn verify_meq1(j: i64, k: u64, degree: usize, order: u64) -> VerificationReport {
    let params = Params::order(order)
        .with_k(k)
        .with_point(j, 4 * k)
        .with_degree(degree);
    run_check(Identity::SquareLaw, params, || {
        if degree < 2 {
            return Err(Error::DegreeTooSmall {
                have: degree,
                need: 2,
            });
        }
        let pt = square_law_point(j, k)?;
        let f = theta2_jet(&pt, degree, order);
        let lhs = f.log_derivative()?.square()?.truncate_degree(degree - 2);
        compare_jets(&lhs, &f.t_of_log()?, order)
    })
}

/// 8q∂q f + ∂z² f = 0 for the θ₂ jet at jπ/(4k).
pub fn verify_heat(j: i64, k: u64, degree: usize, order: u64) -> VerificationReport {
    let params = Params::order(order)
        .with_k(k)
        .with_point(j, 4 * k)
        .with_degree(degree);
    run_check(Identity::HeatEquation, params, || {
        let pt = square_law_point(j, k)?;
        let f = theta2_jet(&pt, degree, order);
        let heat = f
            .q_ddq()
            .scale(&int(8))
            .truncate_degree(degree.saturating_sub(2))
            .add(&f.d_dz()?.d_dz()?)?;
        let zero = ZJet::constant(
            QExpansion::zero(pt.field(), f.coeff(0).base().clone(), f.precision()),
            heat.degree(),
        );
        compare_jets(&heat, &zero, order)
    })
}

fn rational_field_series(
    s: &QExpansion<Rational>,
    field: &std::sync::Arc<CyclotomicField>,
) -> QExpansion<Cyclotomic> {
    s.try_map(field.clone(), |r| Ok(field.from_rational(r)))
        .expect("rational embedding")
}

/// θ₂(0, q) against 2η(2τ)²/η(τ).
pub fn verify_theta_null(order: u64) -> VerificationReport {
    run_check(Identity::ThetaNull, Params::order(order), || {
        let pt = ThetaPoint::at(0, 1);
        let lhs = theta2_series(&pt, order);
        let rhs = eta_product(2, order)
            .square()
            .scale(&int(2))
            .div(&eta_product(1, order))?;
        compare(&lhs, &rational_field_series(&rhs, &pt.field()), order)
    })
}

/// The z¹ slot of θ₂(z - π/2, q) against 2η(τ)³.
pub fn verify_theta_slope(order: u64) -> VerificationReport {
    run_check(Identity::ThetaSlope, Params::order(order), || {
        let pt = ThetaPoint::at(-1, 2);
        let slope = theta2_jet(&pt, 1, order).shift_zero(1)?;
        let rhs = eta_product(1, order).pow(3)?.scale(&int(2));
        compare(
            slope.coeff(0),
            &rational_field_series(&rhs, &pt.field()),
            order,
        )
    })
}

/// Both θ₂ bridges to η.
pub fn verify_eta_theta_bridges(order: u64) -> Vec<VerificationReport> {
    vec![verify_theta_null(order), verify_theta_slope(order)]
}

// Jet of θ₂(kz + z₀, q^k).
fn scaled_jet(num: i64, den: u64, k: u64, degree: usize, order: u64) -> Result<ZJet<Cyclotomic>> {
    let pt = ThetaPoint::at(num, den).with_q_power(k)?;
    Ok(theta2_jet(&pt, degree, order).scale_z(&int(k as i64)))
}

// θ₂(kz - π/2, q^k)/θ₂(z - π/2, q) with the common simple zero removed.
fn ratio_jet(k: u64, degree: usize, order: u64) -> Result<ZJet<Cyclotomic>> {
    let g = scaled_jet(-1, 2, k, degree, order)?.shift_zero(1)?;
    let h = scaled_jet(-1, 2, 1, degree, order)?.shift_zero(1)?;
    g.div(&h)
}

/// ∂z² log θ₂(z, q) at 0, as `2a₂/a₀ - (a₁/a₀)²`, against `8(E_1 - 2E_2)`.
pub fn verify_curvature_origin(order: u64) -> VerificationReport {
    run_check(Identity::CurvatureOrigin, Params::order(order), || {
        let jet = theta2_jet(&ThetaPoint::at(0, 1), 2, order);
        let a0 = jet.coeff(0);
        let r1 = jet.coeff(1).div(a0)?;
        let r2 = jet.coeff(2).div(a0)?;
        let lhs = r2.scale(&int(2)).sub(&r1.square())?;
        let rhs = eta_log_combination(&[(8, 1), (-16, 2)], order);
        compare(&lhs, &rational_field_series(&rhs, a0.ctx()), order)
    })
}

/// ∂z² log of the ratio jet at 0 against `8(E_1 - kE_k)`.
pub fn verify_curvature_ratio(k: u64, degree: usize, order: u64) -> VerificationReport {
    let params = Params::order(order).with_k(k).with_degree(degree);
    run_check(Identity::CurvatureRatio, params, || {
        let ratio = ratio_jet(k, degree, order)?;
        let lhs = ratio.log_second_derivative()?;
        let rhs = eta_log_combination(&[(8, 1), (-8 * k as i64, k)], order);
        compare(
            lhs.coeff(0),
            &rational_field_series(&rhs, lhs.coeff(0).ctx()),
            order,
        )
    })
}

/// T(log θ₂(kz, q^k)) at 0 against `8(k-1)(2E_{2k} - E_k)`.
pub fn verify_t_theta(k: u64, degree: usize, order: u64) -> VerificationReport {
    let params = Params::order(order).with_k(k).with_degree(degree);
    run_check(Identity::TTheta, params, || {
        let t = scaled_jet(0, 1, k, degree, order)?.t_of_log()?;
        let w = 8 * (k as i64 - 1);
        let rhs = eta_log_combination(&[(2 * w, 2 * k), (-w, k)], order);
        compare(
            t.coeff(0),
            &rational_field_series(&rhs, t.coeff(0).ctx()),
            order,
        )
    })
}

/// T of the log of the ratio jet at 0 against `8((k-3)E_k + 2E_1)`.
pub fn verify_t_ratio(k: u64, degree: usize, order: u64) -> VerificationReport {
    let params = Params::order(order).with_k(k).with_degree(degree);
    run_check(Identity::TRatio, params, || {
        let t = ratio_jet(k, degree, order)?.t_of_log()?;
        let rhs = eta_log_combination(&[(8 * (k as i64 - 3), k), (16, 1)], order);
        compare(
            t.coeff(0),
            &rational_field_series(&rhs, t.coeff(0).ctx()),
            order,
        )
    })
}

/// The three k-dependent second-derivative checks.
pub fn verify_second_derivatives(k: u64, degree: usize, order: u64) -> Vec<VerificationReport> {
    vec![
        verify_curvature_ratio(k, degree, order),
        verify_t_theta(k, degree, order),
        verify_t_ratio(k, degree, order),
    ]
}

/// Closed form of Σ tan²(ℓπ/2k) over the residue class, from the constant
/// term of the η side: (k-1)(k-2)/6 for δ = 0 and k(k-1)/2 for δ = 1.
pub fn tangent_sum_closed_form(k: u64, delta: u8) -> Rational {
    let ki = k as i64;
    if delta == 0 {
        rat((ki - 1) * (ki - 2), 6)
    } else {
        rat(ki * (ki - 1), 2)
    }
}

/// The δ = 1 value k(k-1)/6 that circulates for this sum. It disagrees with
/// enumeration for every k ≥ 2; kept so reports can show the discrepancy.
pub fn tangent_sum_circulated_form(k: u64, delta: u8) -> Rational {
    let ki = k as i64;
    if delta == 0 {
        rat((ki - 1) * (ki - 2), 6)
    } else {
        rat(ki * (ki - 1), 6)
    }
}

/// Σ tan²(ℓπ/2k) over the residue class, reduced exactly to a rational.
pub fn tangent_square_value(k: u64, delta: u8) -> Result<Rational> {
    let spec = HalfSumSpec::new(k, delta)?;
    let s = sum_tan_squared(&spec.indices(), 2 * k)?;
    s.to_rational()
        .ok_or_else(|| Error::NotRational(format!("tangent sum {s}")))
}

/// The tangent sum and its report against [`tangent_sum_closed_form`].
pub fn tan_square_sum(k: u64, delta: u8) -> (Option<Rational>, VerificationReport) {
    let mut value = None;
    let params = Params::order(1).with_k(k).with_delta(delta);
    let report = run_check(Identity::TangentSquares, params, || {
        let v = tangent_square_value(k, delta)?;
        let expected = tangent_sum_closed_form(k, delta);
        let circulated = tangent_sum_circulated_form(k, delta);
        let note = (circulated != v).then(|| format!("k(k-1)/6 = {circulated} differs"));
        let mismatch = (v != expected).then(|| MismatchRecord {
            exponent: int(0),
            slot: None,
            lhs: v.to_string(),
            rhs: expected.to_string(),
        });
        value = Some(v);
        Ok(Outcome {
            mismatch,
            certified: int(1),
            note,
        })
    });
    (value, report)
}

fn sigma(m: u64) -> u64 {
    divisors(m).into_iter().sum()
}

/// Both sides for k = 3, δ = 1:
/// `(1 + 2Σ (qⁿ + q²ⁿ - q⁴ⁿ - q⁵ⁿ)/(1 - q⁶ⁿ))²` and
/// `1 + 4Σ (nqⁿ/(1-qⁿ) + nq³ⁿ/(1-q³ⁿ) - 8nq⁶ⁿ/(1-q⁶ⁿ))`.
pub fn k3_sides(order: u64) -> Result<(QExpansion<Rational>, QExpansion<Rational>)> {
    let mut inner = QExpansion::one((), int(order as i64));
    for (a, w) in [(1u64, 2i64), (2, 2), (4, -2), (5, -2)] {
        inner = inner.add(&lambert(a, 6, order).scale(&int(w)))?;
    }
    let coeffs = (0..order)
        .map(|m| {
            if m == 0 {
                return int(1);
            }
            let part = |d: u64| if m % d == 0 { sigma(m / d) as i64 } else { 0 };
            int(4 * (part(1) + part(3) - 8 * part(6)))
        })
        .collect();
    let rhs = QExpansion::new((), int(0), coeffs, int(order as i64))?;
    Ok((inner.square(), rhs))
}

pub fn verify_k3_corollary(order: u64) -> VerificationReport {
    run_check(Identity::K3Lambert, Params::order(order), || {
        let (lhs, rhs) = k3_sides(order)?;
        compare(&lhs, &rhs, order)
    })
}

/// Families of checks, as selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Theorem,
    Lemd,
    Lem2,
    Meq1,
    Lem22,
    Bridges,
    TanSum,
    K3,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Theorem,
        Family::Lemd,
        Family::Lem2,
        Family::Meq1,
        Family::Lem22,
        Family::Bridges,
        Family::TanSum,
        Family::K3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Theorem => "theorem",
            Family::Lemd => "lemd",
            Family::Lem2 => "lem2",
            Family::Meq1 => "meq1",
            Family::Lem22 => "lem22",
            Family::Bridges => "bridges",
            Family::TanSum => "tan-sum",
            Family::K3 => "k3",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// One unit of work; each job yields exactly one report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Job {
    Theorem {
        k: u64,
        delta: u8,
    },
    Lemd {
        l: i64,
        k: u64,
    },
    Lem2 {
        k: u64,
        delta: u8,
        at: HalfProductPoint,
    },
    Meq1 {
        j: i64,
        k: u64,
    },
    Heat {
        j: i64,
        k: u64,
    },
    ThetaNull,
    ThetaSlope,
    CurvatureOrigin,
    CurvatureRatio {
        k: u64,
    },
    TTheta {
        k: u64,
    },
    TRatio {
        k: u64,
    },
    TanSum {
        k: u64,
        delta: u8,
    },
    K3,
}

impl Job {
    pub fn run(&self, order: u64, degree: usize) -> VerificationReport {
        match *self {
            Job::Theorem { k, delta } => verify_theorem(k, delta, order),
            Job::Lemd { l, k } => verify_lemd_at(l, k, order),
            Job::Lem2 { k, delta, at } => verify_lem2_at(k, delta, at, order),
            Job::Meq1 { j, k } => verify_meq1(j, k, degree, order),
            Job::Heat { j, k } => verify_heat(j, k, degree, order),
            Job::ThetaNull => verify_theta_null(order),
            Job::ThetaSlope => verify_theta_slope(order),
            Job::CurvatureOrigin => verify_curvature_origin(order),
            Job::CurvatureRatio { k } => verify_curvature_ratio(k, degree, order),
            Job::TTheta { k } => verify_t_theta(k, degree, order),
            Job::TRatio { k } => verify_t_ratio(k, degree, order),
            Job::TanSum { k, delta } => tan_square_sum(k, delta).1,
            Job::K3 => verify_k3_corollary(order),
        }
    }
}

/// What to run. Lemma-level families are capped at k ≤ 12.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub k_min: u64,
    pub k_max: u64,
    pub deltas: Vec<u8>,
    pub order: u64,
    pub jet_degree: usize,
    pub families: Vec<Family>,
    pub jobs: usize,
}

/// Largest k used for the lemma-level families.
pub const LEMMA_K_CAP: u64 = 12;

impl SuiteConfig {
    /// Every family for 1 ≤ k ≤ k_max and both δ.
    pub fn full(k_max: u64, order: u64, jet_degree: usize) -> Self {
        SuiteConfig {
            k_min: 1,
            k_max,
            deltas: vec![0, 1],
            order,
            jet_degree,
            families: Family::ALL.to_vec(),
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }

    fn has(&self, f: Family) -> bool {
        self.families.contains(&f)
    }

    /// The job list, deduplicated, in a fixed order.
    pub fn enumerate(&self) -> Vec<Job> {
        let ks = self.k_min..=self.k_max;
        let lemma_ks = self.k_min..=self.k_max.min(LEMMA_K_CAP);
        let mut jobs = Vec::new();
        if self.has(Family::Theorem) {
            for k in ks.clone() {
                for &delta in &self.deltas {
                    jobs.push(Job::Theorem { k, delta });
                }
            }
        }
        if self.has(Family::Lemd) {
            for k in lemma_ks.clone() {
                for l in (0..2 * k as i64).filter(|&l| l != k as i64) {
                    jobs.push(Job::Lemd { l, k });
                }
            }
        }
        if self.has(Family::Lem2) {
            for k in lemma_ks.clone() {
                for &delta in &self.deltas {
                    jobs.push(Job::Lem2 {
                        k,
                        delta,
                        at: HalfProductPoint::Eighth,
                    });
                    if k <= 5 {
                        jobs.push(Job::Lem2 {
                            k,
                            delta,
                            at: HalfProductPoint::Twelfth,
                        });
                    }
                }
            }
        }
        if self.has(Family::Meq1) {
            for k in lemma_ks.clone() {
                for j in square_law_points(k) {
                    jobs.push(Job::Meq1 { j, k });
                    jobs.push(Job::Heat { j, k });
                }
            }
        }
        if self.has(Family::Lem22) {
            jobs.push(Job::CurvatureOrigin);
            for k in lemma_ks.clone() {
                jobs.push(Job::CurvatureRatio { k });
                jobs.push(Job::TTheta { k });
                jobs.push(Job::TRatio { k });
            }
        }
        if self.has(Family::Bridges) {
            jobs.push(Job::ThetaNull);
            jobs.push(Job::ThetaSlope);
        }
        if self.has(Family::TanSum) {
            for k in ks {
                for &delta in &self.deltas {
                    jobs.push(Job::TanSum { k, delta });
                }
            }
        }
        if self.has(Family::K3) {
            jobs.push(Job::K3);
        }
        jobs
    }
}

/// Runs `jobs` on up to `parallelism` threads. Reports come back in job
/// order; `on_report` sees them in completion order, one at a time.
pub fn run_jobs(
    jobs: &[Job],
    order: u64,
    degree: usize,
    parallelism: usize,
    on_report: impl Fn(&VerificationReport) + Sync,
) -> Vec<VerificationReport> {
    let next = AtomicUsize::new(0);
    let done: Mutex<BTreeMap<usize, VerificationReport>> = Mutex::new(BTreeMap::new());
    let workers = parallelism.clamp(1, jobs.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let report = job.run(order, degree);
                let mut done = done.lock().expect("report map");
                on_report(&report);
                done.insert(i, report);
            });
        }
    });
    done.into_inner()
        .expect("report map")
        .into_values()
        .collect()
}

/// Enumerates and runs the configured suite.
pub fn full_suite(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    run_jobs(
        &cfg.enumerate(),
        cfg.order,
        cfg.jet_degree,
        cfg.jobs,
        |_| {},
    )
}

/// Number of failed reports.
pub fn failures(reports: &[VerificationReport]) -> usize {
    reports.iter().filter(|r| !r.passed()).count()
}

/// Total elapsed time, in seconds.
pub fn total_seconds(reports: &[VerificationReport]) -> f64 {
    reports.iter().map(|r| r.elapsed.as_secs_f64()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_sets() {
        assert_eq!(HalfSumSpec::new(3, 1).unwrap().indices(), vec![0, 2]);
        assert_eq!(HalfSumSpec::new(3, 0).unwrap().indices(), vec![1]);
        assert!(HalfSumSpec::new(1, 0).unwrap().indices().is_empty());
        assert_eq!(residue_class(2, 0, 4), vec![0, 2]);
    }

    #[test]
    fn half_sum_examples() {
        assert!(half_sum(HalfSumSpec::new(2, 0).unwrap(), 20)
            .unwrap()
            .is_zero());
        assert!(half_sum(HalfSumSpec::new(1, 0).unwrap(), 20)
            .unwrap()
            .is_zero());
        let s = half_sum(HalfSumSpec::new(3, 0).unwrap(), 20).unwrap();
        assert_eq!(s.coeff(&int(0)), rat(1, 3));
    }

    #[test]
    fn theorem_rhs_examples() {
        assert!(theorem_rhs(2, 0, 30).is_zero());
        assert!(theorem_rhs(1, 1, 30).is_zero());
        assert_eq!(theorem_rhs(3, 0, 5).coeff(&int(0)), rat(1, 3));
    }

    #[test]
    fn small_theorem_cases() {
        for (k, d) in [
            (1, 0),
            (1, 1),
            (2, 0),
            (2, 1),
            (3, 0),
            (3, 1),
            (4, 1),
            (5, 0),
        ] {
            let r = verify_theorem(k, d, 40);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn lemma_checks_small() {
        for r in verify_lemd(2, 30).into_iter().chain(verify_lemd(5, 20)) {
            assert!(r.passed(), "{r}");
        }
        for (k, d) in [(1, 1), (1, 0), (2, 0), (3, 1), (4, 0)] {
            let r = verify_lem2(k, d, 30);
            assert!(r.passed(), "{r}");
            let r = verify_lem2_at(k, d, HalfProductPoint::Twelfth, 20);
            assert!(r.passed(), "{r}");
        }
        for j in square_law_points(3) {
            assert!(verify_meq1(j, 3, 4, 20).passed());
            assert!(verify_heat(j, 3, 4, 20).passed());
        }
    }

    #[test]
    fn bridges_and_derivatives() {
        for r in verify_eta_theta_bridges(60) {
            assert!(r.passed(), "{r}");
        }
        assert!(verify_curvature_origin(40).passed());
        for k in 1..=4 {
            for r in verify_second_derivatives(k, 4, 30) {
                assert!(r.passed(), "{r}");
            }
        }
    }

    #[test]
    fn tangent_sums() {
        assert_eq!(tangent_square_value(3, 1).unwrap(), int(3));
        assert_eq!(tangent_square_value(3, 0).unwrap(), rat(1, 3));
        let (v, r) = tan_square_sum(3, 1);
        assert_eq!(v, Some(int(3)));
        assert!(r.passed());
        assert!(r.note.is_some());
        assert!(tan_square_sum(6, 0).1.note.is_none());
    }

    #[test]
    fn k3_identity() {
        assert!(verify_k3_corollary(100).passed());
    }

    #[test]
    fn sign_flipped_constant_fails_when_parities_differ() {
        use crate::modular::halfprod_constant_sign_flipped;
        for (k, d) in [(1u64, 0u8), (2, 1), (3, 0), (4, 1)] {
            let c = halfprod_constant_sign_flipped(k, d);
            let (lhs, rhs) = half_product_sides(k, d, HalfProductPoint::Eighth, &c, 10).unwrap();
            assert!(!lhs.equal_to(&rhs, &int(10)).unwrap().is_equal());
        }
    }

    #[test]
    fn failure_is_reported_with_mismatch() {
        let r = run_check(Identity::HalfSum, Params::order(4), || {
            let a = QExpansion::<Rational>::one((), int(4));
            let b = QExpansion::monomial(int(2), int(0), int(4));
            compare(&a, &b, 4)
        });
        assert_eq!(r.status, Status::Fail);
        let m = r.first_mismatch.unwrap();
        assert_eq!((m.exponent, m.lhs, m.rhs), (int(0), "1".into(), "2".into()));
        let short = run_check(Identity::HalfSum, Params::order(10), || {
            let a = QExpansion::<Rational>::one((), int(4));
            compare(&a, &a, 10)
        });
        assert_eq!(short.status, Status::Fail);
    }

    #[test]
    fn suite_bookkeeping() {
        let cfg = SuiteConfig::full(2, 10, 4);
        let jobs = cfg.enumerate();
        let reports = full_suite(&cfg);
        assert_eq!(reports.len(), jobs.len());
        assert_eq!(
            failures(&reports),
            0,
            "{:#?}",
            reports.iter().filter(|r| !r.passed()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn json_shape() {
        let r = verify_theorem(3, 0, 5);
        let v = serde_json::to_value(&r).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(
            keys,
            [
                "elapsed_ms",
                "first_mismatch",
                "identity",
                "order",
                "params",
                "status"
            ]
        );
        assert_eq!(v["identity"], "half-sum");
        assert_eq!(v["status"], "pass");
        assert!(v["first_mismatch"].is_null());
        let m = MismatchRecord {
            exponent: rat(1, 8),
            slot: None,
            lhs: "1".into(),
            rhs: "2".into(),
        };
        let mv = serde_json::to_value(&m).unwrap();
        assert_eq!(mv["exponent_num"], 1);
        assert_eq!(mv["exponent_den"], 8);
    }
}
