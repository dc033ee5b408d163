//! sin, cos and tan at rational multiples of π as exact cyclotomic numbers.
//!
//! With ζ = e^{ipπ/q}, everything is a group-ring expression in a root of
//! unity except the division in tan. That division uses the closed forms
//!
//!   1/(1-u)   = -(1/n) Σ_{j<n} j·u^j,
//!   1/(1-u)²  = Σ_{j<n} j(n-2-j)/(2n) · u^j,
//!
//! valid for any u ≠ 1 with u^n = 1, so no field inversion is ever needed.

use num_bigint::BigInt;

use super::{lcm_u64, Cyclotomic, CyclotomicField, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Sin,
    Cos,
    Tan,
}

// Conductor holding ζ_{2q} and i, and the exponent of e^{ipπ/q} in it.
fn setup(p: i64, q: u64) -> Result<(u64, i64)> {
    if q == 0 {
        return Err(Error::InvalidArgument(
            "trig denominator must be positive".into(),
        ));
    }
    let m = lcm_u64(2 * q, 4);
    let e = (p as i128 * (m / (2 * q)) as i128).rem_euclid(m as i128) as i64;
    Ok((m, e))
}

/// sin, cos or tan of `pπ/q`, in ℚ(ζ_M) with M = lcm(2q, 4).
///
/// tan at an odd multiple of π/2 is a [`Error::Pole`].
pub fn trig_value(kind: Trig, p: i64, q: u64) -> Result<Cyclotomic> {
    let (m, e) = setup(p, q)?;
    let field = CyclotomicField::new(m);
    let mi = m as i64;
    let quarter = mi / 4;
    let half = Rational::new(1.into(), 2.into());
    Ok(match kind {
        Trig::Sin => field.from_powers(&[(3 * quarter + e, half.clone()), (quarter - e, half)]),
        Trig::Cos => field.from_powers(&[(e, half.clone()), (-e, half)]),
        Trig::Tan => {
            let step = tan_step(p, q, m, e)?;
            // tan = (i/n)(w - 1) Σ j u^j
            let n = BigInt::from(m);
            let mut terms: Vec<(i64, Rational)> = Vec::with_capacity(2 * m as usize);
            for j in 1..mi {
                let c = Rational::new(BigInt::from(j), n.clone());
                let idx = j * step + quarter;
                terms.push((idx + 2 * e, c.clone()));
                terms.push((idx, -c));
            }
            field.from_powers(&terms)
        }
    })
}

// Checks the pole condition and returns the exponent step of u = -w = -ζ².
fn tan_step(p: i64, q: u64, m: u64, e: i64) -> Result<i64> {
    let mi = m as i64;
    let step = (2 * e + mi / 2).rem_euclid(mi);
    if step == 0 {
        return Err(Error::Pole(format!("tan({p}π/{q})")));
    }
    Ok(step)
}

// Adds the integer group-ring numerators of tan²(pπ/q) · 2n into `acc`.
fn add_tan_squared(acc: &mut [i128], p: i64, q: u64) -> Result<()> {
    let (m, e) = setup(p, q)?;
    let step = tan_step(p, q, m, e)?;
    let mi = m as i64;
    debug_assert_eq!(acc.len(), m as usize);
    // tan² = -(w - 1)² / (1 - u)², with (w - 1)² = w² - 2w + 1
    let shifts = [(4 * e, -1i128), (2 * e, 2), (0, -1)];
    for j in 1..mi {
        let c = (j as i128) * ((mi - 2 - j) as i128);
        if c == 0 {
            continue;
        }
        let idx = j * step;
        for &(s, sign) in &shifts {
            let slot = (idx + s).rem_euclid(mi) as usize;
            acc[slot] += sign * c;
        }
    }
    Ok(())
}

/// tan²(pπ/q) in ℚ(ζ_M), M = lcm(2q, 4).
pub fn tan_squared(p: i64, q: u64) -> Result<Cyclotomic> {
    sum_tan_squared(&[p], q)
}

/// Σ tan²(pπ/q) over `ps`, accumulated in the group ring and reduced once.
pub fn sum_tan_squared(ps: &[i64], q: u64) -> Result<Cyclotomic> {
    let (m, _) = setup(0, q)?;
    let mut acc = vec![0i128; m as usize];
    for &p in ps {
        add_tan_squared(&mut acc, p, q)?;
    }
    let field = CyclotomicField::new(m);
    let nums = acc.into_iter().map(BigInt::from).collect();
    Ok(field.from_int_poly(nums, BigInt::from(2 * m)))
}
