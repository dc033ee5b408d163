//! q-expansions of η(ατ), θ₂(z, q) at rational multiples of π, and the
//! Lambert form of ∂z log θ₂.
//!
//! Conventions: `θ₂(z, q) = Σ_{n∈ℤ} q^{(2n+1)²/8} e^{i(2n+1)z}` and
//! `η(τ) = q^{1/24} Π_{n≥1} (1 - qⁿ)`. Generators take a relative `order`:
//! the result is certified for exponents below `base + order`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{
    gcd_u64, int, lcm_u64, rat, trig_value, Coefficient, Cyclotomic, CyclotomicField, Rational,
    Trig,
};
use crate::qexp::{divisors, lambert, QExpansion};
use crate::zjet::ZJet;

/// A base point z₀ = `num`·π/`den` for θ₂(z, q^s), with the conductor of the
/// cyclotomic field its expansion lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThetaPoint {
    num: i64,
    den: u64,
    q_power: u64,
    conductor: u64,
}

impl ThetaPoint {
    /// Fails if the conductor cannot hold e^{iz₀} and i.
    pub fn new(num: i64, den: u64, q_power: u64, conductor: u64) -> Result<Self> {
        if den == 0 || q_power == 0 {
            return Err(Error::InvalidArgument(
                "theta point needs positive denominator and q power".into(),
            ));
        }
        let g = gcd_u64(num.unsigned_abs(), den).max(1);
        let (num, den) = (num / g as i64, den / g);
        let needed = Self::min_conductor(den);
        if conductor == 0 || !conductor.is_multiple_of(needed) {
            return Err(Error::ConductorTooSmall { conductor, needed });
        }
        Ok(ThetaPoint {
            num,
            den,
            q_power,
            conductor,
        })
    }

    /// z₀ = num·π/den with q_power 1 in the smallest admissible conductor.
    pub fn at(num: i64, den: u64) -> Self {
        let g = gcd_u64(num.unsigned_abs(), den).max(1);
        let den = den / g;
        Self::new(num / g as i64, den, 1, Self::min_conductor(den)).expect("minimal conductor")
    }

    fn min_conductor(den: u64) -> u64 {
        lcm_u64(2 * den, 4)
    }

    pub fn with_q_power(self, s: u64) -> Result<Self> {
        Self::new(self.num, self.den, s, self.conductor)
    }

    pub fn with_conductor(self, m: u64) -> Result<Self> {
        Self::new(self.num, self.den, self.q_power, m)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn q_power(&self) -> u64 {
        self.q_power
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// True at the zeros z₀ ≡ π/2 (mod π) of θ₂.
    pub fn is_theta_zero(&self) -> bool {
        // num/den = (odd)/2
        self.den == 2 && self.num.rem_euclid(2) == 1
    }

    /// Exponent e with e^{iz₀} = ζ_M^e in the point's conductor M.
    fn phase_exponent(&self) -> i64 {
        let m = self.conductor as i64;
        (self.num % m) * (m / (2 * self.den as i64)) % m
    }

    pub fn field(&self) -> std::sync::Arc<CyclotomicField> {
        CyclotomicField::new(self.conductor)
    }
}

impl std::fmt::Display for ThetaPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}π/{}", self.num, self.den)?;
        if self.q_power != 1 {
            write!(f, " at q^{}", self.q_power)?;
        }
        Ok(())
    }
}

/// η(ατ) = q^{α/24} Π_{n≥1}(1 - q^{αn}), certified for `order` integer
/// steps past the base.
pub fn eta_product(alpha: u64, order: u64) -> QExpansion<Rational> {
    assert!(alpha >= 1, "eta_product needs a positive alpha");
    let base = rat(alpha as i64, 24);
    let precision = &base + int(order as i64);
    let mut out = QExpansion::monomial(int(1), base, precision);
    let minus_one = int(-1);
    let mut m = alpha;
    while m < order {
        out.mul_binomial(&minus_one, m as usize);
        m += alpha;
    }
    out
}

/// q·d/dq log η(ατ) = α/24 - Σ_{n≥1} αn q^{αn}/(1 - q^{αn}), to `order`.
///
/// The coefficient of q^m is minus the sum of the divisors of m that are
/// multiples of α.
pub fn eta_log_ddq(alpha: u64, order: u64) -> QExpansion<Rational> {
    assert!(alpha >= 1, "eta_log_ddq needs a positive alpha");
    let coeffs = (0..order)
        .map(|m| {
            if m == 0 {
                return rat(alpha as i64, 24);
            }
            let s: u64 = divisors(m).into_iter().filter(|d| d % alpha == 0).sum();
            Rational::from_integer(-BigInt::from(s))
        })
        .collect();
    QExpansion::new((), int(0), coeffs, int(order as i64)).expect("eta_log_ddq fits order")
}

// n ≥ 0 with s·n(n+1)/2 < order, as (n, offset).
fn theta_offsets(s: u64, order: u64) -> impl Iterator<Item = (u64, u64)> {
    (0u64..)
        .map(move |n| (n, s * n * (n + 1) / 2))
        .take_while(move |&(_, t)| t < order)
}

/// The z-jet of θ₂(z₀ + z, q^s) to degree `degree`, from the defining series.
///
/// Slot j is `Σ_n (i(2n+1))^j / j! · q^{s(2n+1)²/8} e^{i(2n+1)z₀}`; the
/// terms n and -1-n share an exponent and are summed together.
pub fn theta2_jet(pt: &ThetaPoint, degree: usize, order: u64) -> ZJet<Cyclotomic> {
    let field = pt.field();
    let m = pt.conductor as i64;
    let quarter = m / 4;
    let e = pt.phase_exponent();
    let s = pt.q_power;
    let base = rat(s as i64, 8);
    let precision = &base + int(order as i64);
    let len = order as usize;
    let mut slots: Vec<Vec<Cyclotomic>> = vec![vec![field.zero(); len]; degree + 1];
    let mut factorial = int(1);
    for (j, slot) in slots.iter_mut().enumerate() {
        if j > 0 {
            factorial *= int(j as i64);
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        for (n, t) in theta_offsets(s, order) {
            let odd = 2 * n as i64 + 1;
            let up = field.root_of_unity(j as i64 * quarter + odd * e);
            let down = field.root_of_unity(j as i64 * quarter - odd * e);
            let pair = if sign == 1 { &up + &down } else { &up - &down };
            let weight = Rational::from_integer(BigInt::from(odd).pow(j as u32)) / &factorial;
            slot[t as usize] = pair.scale(&weight);
        }
    }
    let coeffs = slots
        .into_iter()
        .map(|c| {
            QExpansion::new(field.clone(), base.clone(), c, precision.clone())
                .expect("theta slot fits order")
        })
        .collect();
    ZJet::new(coeffs).expect("theta jet slots share a field")
}

/// θ₂(z₀, q^s) as a q-series (slot 0 of the jet).
pub fn theta2_series(pt: &ThetaPoint, order: u64) -> QExpansion<Cyclotomic> {
    theta2_jet(pt, 0, order).coeff(0).clone()
}

/// θ₂(z₀, q^s) from the Jacobi triple product
/// `q^{s/8} e^{-iz₀} Π_{n≥1}(1 - q^{sn})(1 + e^{-2iz₀} q^{sn})(1 + e^{2iz₀} q^{s(n-1)})`.
pub fn theta2_triple_product(pt: &ThetaPoint, order: u64) -> QExpansion<Cyclotomic> {
    let field = pt.field();
    let e = pt.phase_exponent();
    let s = pt.q_power;
    let base = rat(s as i64, 8);
    let precision = &base + int(order as i64);
    let mut out = QExpansion::monomial(field.root_of_unity(-e), base, precision);
    let minus_one = field.from_rational(&int(-1));
    let down = field.root_of_unity(-2 * e);
    let up = field.root_of_unity(2 * e);
    let mut n = 1u64;
    while s * (n - 1) < order {
        if s * n < order {
            out.mul_binomial(&minus_one, (s * n) as usize);
            out.mul_binomial(&down, (s * n) as usize);
        }
        out.mul_binomial(&up, (s * (n - 1)) as usize);
        if out.is_zero() {
            break;
        }
        n += 1;
    }
    out
}

/// ∂z log θ₂(ℓπ/2k, q) in Lambert form, over ℚ(ζ_{4k}):
///
/// `-tan(ℓπ/2k) + 4 Σ_{h=1}^{2k} (-1)^h sin(ℓhπ/k) Σ_{n≥1} q^{hn}/(1 - q^{2kn})`.
///
/// ℓ ≡ k (mod 2k) is a zero of θ₂ and is rejected as a pole.
pub fn log_deriv_lambert(l: i64, k: u64, order: u64) -> Result<QExpansion<Cyclotomic>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let period = 2 * k as i64;
    if l.rem_euclid(period) == k as i64 {
        return Err(Error::Pole(format!(
            "log-derivative of theta2 at {l}π/{period}"
        )));
    }
    let m = 4 * k;
    let field = CyclotomicField::new(m);
    let constant = trig_value(Trig::Tan, l, 2 * k)?.embed(m)?.negated();
    let mut weights = Vec::with_capacity(2 * k as usize);
    let mut lamberts = Vec::with_capacity(2 * k as usize);
    for h in 1..=2 * k {
        let sign = if h % 2 == 0 { 4 } else { -4 };
        let w = trig_value(Trig::Sin, l * h as i64, k)?
            .embed(m)?
            .scale(&int(sign));
        weights.push(w);
        lamberts.push(lambert(h, 2 * k, order));
    }
    let mut coeffs = Vec::with_capacity(order as usize);
    coeffs.push(constant);
    for t in 1..order {
        let exp = int(t as i64);
        let mut c = field.zero();
        for (w, lam) in weights.iter().zip(&lamberts) {
            let count = lam.coeff(&exp);
            if !count.is_zero() && !w.is_zero() {
                c = &c + &w.scale(&count);
            }
        }
        coeffs.push(c);
    }
    QExpansion::new(field, int(0), coeffs, int(order as i64))
}

/// The constant C in Π_ℓ θ₂(z + ℓπ/2k, q) = C · η(τ)^k/η(kτ) · θ₂(kz + (δ-1)π/2, q^k),
/// the product over 0 ≤ ℓ < 2k with ℓ - k ≡ δ (mod 2).
///
/// Collecting the phases of the triple products gives
/// `C = exp(iπ(δ-1)/2 - iπ(k - 1 + [k ≢ δ])/2) = i^{δ - k - [k ≢ δ]}`.
pub fn halfprod_constant(k: u64, delta: u8) -> Cyclotomic {
    let mismatch = i64::from((k % 2) as u8 != delta % 2);
    quarter_turns(delta as i64 - k as i64 - mismatch)
}

/// `i^{δ - k + [k ≢ δ]}`: the closed form obtained by simplifying the phase
/// sum with the opposite sign on the indicator. It differs from
/// [`halfprod_constant`] by a factor -1 exactly when k ≢ δ (mod 2).
pub fn halfprod_constant_sign_flipped(k: u64, delta: u8) -> Cyclotomic {
    let mismatch = i64::from((k % 2) as u8 != delta % 2);
    quarter_turns(delta as i64 - k as i64 + mismatch)
}

fn quarter_turns(e: i64) -> Cyclotomic {
    CyclotomicField::new(4).root_of_unity(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_coefficients() {
        let eta = eta_product(1, 8);
        assert_eq!(eta.base(), &rat(1, 24));
        let got: Vec<Rational> = (0..8).map(|i| eta.coeff(&(rat(1, 24) + int(i)))).collect();
        assert_eq!(got, [1, -1, -1, 0, 0, 1, 0, 1].map(int));
        let eta2 = eta_product(2, 20);
        for i in (1..20).step_by(2) {
            assert!(eta2.coeff(&(rat(1, 12) + int(i))).is_zero());
        }
        // η(ατ) is η(τ) with q ↦ q^α
        for alpha in [2u64, 3, 5] {
            let direct = eta_product(alpha, 40);
            let scaled = eta_product(1, 40u64.div_ceil(alpha)).scale_q(alpha);
            assert!(direct
                .equal_to(&scaled, direct.precision())
                .unwrap()
                .is_equal());
        }
    }

    #[test]
    fn eta_log_derivative() {
        let d = eta_log_ddq(1, 5);
        let got: Vec<Rational> = (0..5).map(|i| d.coeff(&int(i))).collect();
        assert_eq!(got, vec![rat(1, 24), int(-1), int(-3), int(-4), int(-7)]);
        let d2 = eta_log_ddq(2, 30);
        for i in (1..30).step_by(2) {
            assert!(d2.coeff(&int(i)).is_zero());
        }
        // against q d/dq of the product, divided by the product
        for alpha in [1u64, 2, 3] {
            let eta = eta_product(alpha, 40);
            let ratio = eta.q_ddq().div(&eta).unwrap();
            assert!(ratio
                .equal_to(&eta_log_ddq(alpha, 40), &int(40))
                .unwrap()
                .is_equal());
        }
    }

    #[test]
    fn theta_at_zero() {
        let pt = ThetaPoint::at(0, 1);
        let jet = theta2_jet(&pt, 1, 30);
        let a0 = jet.coeff(0);
        assert_eq!(a0.base(), &rat(1, 8));
        let field = pt.field();
        for t in 0..30i64 {
            let tri = (0..8).any(|n| n * (n + 1) / 2 == t);
            let expect = field.from_rational(&int(if tri { 2 } else { 0 }));
            assert_eq!(a0.coeff(&(rat(1, 8) + int(t))), expect, "offset {t}");
        }
        assert!(jet.coeff(1).is_zero());
    }

    #[test]
    fn theta_vanishes_at_half_pi() {
        let pt = ThetaPoint::at(-1, 2);
        let jet = theta2_jet(&pt, 1, 40);
        assert!(jet.coeff(0).is_zero());
        assert!(jet.shift_zero(1).is_ok());
        assert!(theta2_triple_product(&pt, 40).is_zero());
    }

    #[test]
    fn triple_product_prefactor() {
        // z₀ = π/3 in ℚ(ζ12): e^{iz₀} = ζ², lead term e^{-iz₀}(1 + e^{2iz₀})
        let pt = ThetaPoint::at(1, 3);
        let field = pt.field();
        let t = theta2_triple_product(&pt, 5);
        let lead = &field.root_of_unity(-2) * &(&field.one() + &field.root_of_unity(4));
        assert_eq!(t.coeffs()[0], lead);
        assert_eq!(lead, &field.root_of_unity(2) + &field.root_of_unity(-2));
    }

    #[test]
    fn triple_product_matches_series() {
        for k in 1..=4u64 {
            for l in 0..2 * k as i64 {
                let pt = ThetaPoint::at(l, 2 * k);
                let series = theta2_series(&pt, 40);
                let product = theta2_triple_product(&pt, 40);
                assert!(
                    series.equal_to(&product, &int(40)).unwrap().is_equal(),
                    "l={l} k={k}"
                );
            }
        }
        let pi = theta2_series(&ThetaPoint::at(1, 1), 30);
        let zero = theta2_series(&ThetaPoint::at(0, 1).with_conductor(2 * 2).unwrap(), 30);
        assert!(pi.equal_to(&zero.neg(), &int(30)).unwrap().is_equal());
    }

    #[test]
    fn lambert_form_special_cases() {
        assert!(log_deriv_lambert(0, 3, 30).unwrap().is_zero());
        let s = log_deriv_lambert(1, 2, 10).unwrap();
        assert_eq!(s.coeff(&int(0)).to_rational(), Some(int(-1)));
        assert!(matches!(log_deriv_lambert(2, 2, 10), Err(Error::Pole(_))));
        for c in log_deriv_lambert(3, 5, 40).unwrap().coeffs() {
            assert!(c.is_real());
        }
    }

    #[test]
    fn half_product_constants() {
        let one = CyclotomicField::new(4).one();
        assert_eq!(halfprod_constant(1, 1), one);
        assert_eq!(halfprod_constant(1, 0), -&one);
        assert_eq!(halfprod_constant(2, 0), -&one);
        assert_eq!(halfprod_constant(3, 0), one);
        assert_eq!(halfprod_constant_sign_flipped(3, 0), -&one);
        for k in 1..8 {
            for d in 0..2u8 {
                let same = (k % 2) as u8 == d;
                assert_eq!(
                    halfprod_constant(k, d) == halfprod_constant_sign_flipped(k, d),
                    same
                );
            }
        }
    }

    #[test]
    fn point_validation() {
        assert!(matches!(
            ThetaPoint::new(1, 8, 1, 8),
            Err(Error::ConductorTooSmall { needed: 16, .. })
        ));
        assert!(ThetaPoint::new(1, 8, 3, 48).is_ok());
        assert!(ThetaPoint::at(3, 2).is_theta_zero());
        assert!(!ThetaPoint::at(1, 4).is_theta_zero());
    }
}
