//! Truncated q-expansions with a rational leading exponent.
//!
//! A [`QExpansion`] stands for `Σ_{i<L} c_i q^{e+i} + O(q^P)`: integer steps
//! above a rational base `e`, certified below the absolute precision `P`.
//! Arithmetic tracks `P` pessimistically, so every stored coefficient is
//! fully determined by the inputs.

mod lambert;

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

pub use lambert::{divisors, lambert};

use crate::error::{Error, Result};
use crate::exact::{Coefficient, Rational};

#[derive(Clone)]
pub struct QExpansion<F: Coefficient> {
    ctx: F::Ctx,
    base: Rational,
    coeffs: Vec<F>,
    precision: Rational,
}

/// First exponent at which two series disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch<F> {
    pub exponent: Rational,
    pub lhs: F,
    pub rhs: F,
}

/// Outcome of [`QExpansion::equal_to`].
#[derive(Debug, Clone, PartialEq)]
pub enum Comparison<F> {
    Equal,
    Differs(Mismatch<F>),
}

impl<F> Comparison<F> {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }

    pub fn mismatch(&self) -> Option<&Mismatch<F>> {
        match self {
            Comparison::Equal => None,
            Comparison::Differs(m) => Some(m),
        }
    }
}

// Number of integer steps i ≥ 0 with base + i < precision.
fn steps_below(base: &Rational, precision: &Rational) -> usize {
    let gap = precision - base;
    if !gap.is_positive() {
        return 0;
    }
    gap.ceil()
        .to_integer()
        .to_usize()
        .expect("series length overflow")
}

fn is_integral(r: &Rational) -> bool {
    r.is_integer()
}

impl<F: Coefficient> QExpansion<F> {
    /// `Σ coeffs[i] q^{base+i} + O(q^precision)`.
    ///
    /// Fails if a coefficient sits at or above the precision.
    pub fn new(ctx: F::Ctx, base: Rational, coeffs: Vec<F>, precision: Rational) -> Result<Self> {
        let mut s = QExpansion {
            ctx,
            base,
            coeffs,
            precision,
        };
        s.trim_trailing();
        if &s.base + Rational::from_integer(s.coeffs.len().into()) > s.precision {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients from q^{} exceed precision {}",
                s.coeffs.len(),
                s.base,
                s.precision
            )));
        }
        s.trim_leading();
        Ok(s)
    }

    // Internal constructor: drops coefficients at or above the precision.
    fn clipped(ctx: F::Ctx, base: Rational, mut coeffs: Vec<F>, precision: Rational) -> Self {
        coeffs.truncate(steps_below(&base, &precision));
        let mut s = QExpansion {
            ctx,
            base,
            coeffs,
            precision,
        };
        s.trim_trailing();
        s.trim_leading();
        s
    }

    /// The zero series `O(q^precision)` in the exponent class of `base`.
    pub fn zero(ctx: F::Ctx, base: Rational, precision: Rational) -> Self {
        QExpansion {
            ctx,
            base,
            coeffs: Vec::new(),
            precision,
        }
    }

    /// The constant `c + O(q^precision)`.
    pub fn constant(c: F, precision: Rational) -> Self {
        Self::monomial(c, Rational::zero(), precision)
    }

    pub fn one(ctx: F::Ctx, precision: Rational) -> Self {
        Self::constant(F::one_of(&ctx), precision)
    }

    /// `c q^exponent + O(q^precision)`.
    pub fn monomial(c: F, exponent: Rational, precision: Rational) -> Self {
        let ctx = c.ctx();
        Self::clipped(ctx, exponent, vec![c], precision)
    }

    fn trim_leading(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.vanishes()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.base += Rational::from_integer(lead.into());
        }
    }

    fn trim_trailing(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.vanishes()) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    /// Leading exponent (the valuation, unless the series is zero).
    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Absolute precision: the series is certified for exponents below this.
    pub fn precision(&self) -> &Rational {
        &self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the first nonzero term, if any.
    pub fn valuation(&self) -> Option<&Rational> {
        (!self.is_zero()).then_some(&self.base)
    }

    // Lower bound for the valuation used in precision bookkeeping.
    fn valuation_bound(&self) -> &Rational {
        if self.is_zero() {
            &self.precision
        } else {
            &self.base
        }
    }

    /// Coefficient of `q^exponent`; zero off the stored support.
    ///
    /// Exponents at or above the precision are not certified and also read as
    /// zero; callers compare through [`QExpansion::equal_to`] instead.
    pub fn coeff(&self, exponent: &Rational) -> F {
        let off = exponent - &self.base;
        if !is_integral(&off) || off.is_negative() {
            return F::zero_of(&self.ctx);
        }
        off.to_integer()
            .to_usize()
            .and_then(|i| self.coeffs.get(i).cloned())
            .unwrap_or_else(|| F::zero_of(&self.ctx))
    }

    /// Coefficient at `base + offset`, for callers working in offsets.
    pub fn coeff_at_offset(&self, from: &Rational, offset: usize) -> F {
        self.coeff(&(from + Rational::from_integer(offset.into())))
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ConductorMismatch {
                left: F::ctx_id(&self.ctx),
                right: F::ctx_id(&other.ctx),
            })
        }
    }

    fn check_class(&self, other: &Self) -> Result<()> {
        if self.is_zero() || other.is_zero() || is_integral(&(&self.base - &other.base)) {
            Ok(())
        } else {
            Err(Error::IncompatibleBase {
                left: self.base.to_string(),
                right: other.base.to_string(),
            })
        }
    }

    fn combine(&self, other: &Self, subtract: bool) -> Result<Self> {
        self.check_ctx(other)?;
        self.check_class(other)?;
        let precision = self.precision.clone().min(other.precision.clone());
        let base = match (self.is_zero(), other.is_zero()) {
            (true, true) => self.base.clone(),
            (true, false) => other.base.clone(),
            (false, true) => self.base.clone(),
            (false, false) => self.base.clone().min(other.base.clone()),
        };
        let n = steps_below(&base, &precision);
        let end_a = &self.base + Rational::from_integer(self.coeffs.len().into()) - &base;
        let end_b = &other.base + Rational::from_integer(other.coeffs.len().into()) - &base;
        let span = end_a.max(end_b).ceil().to_integer().to_usize().unwrap_or(0);
        let mut coeffs = Vec::with_capacity(n.min(span));
        for i in 0..n.min(span) {
            let a = self.coeff_at_offset(&base, i);
            let b = other.coeff_at_offset(&base, i);
            coeffs.push(if subtract { a.minus(&b) } else { a.plus(&b) });
        }
        Ok(Self::clipped(self.ctx.clone(), base, coeffs, precision))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        QExpansion {
            ctx: self.ctx.clone(),
            base: self.base.clone(),
            coeffs: self.coeffs.iter().map(F::negated).collect(),
            precision: self.precision.clone(),
        }
    }

    /// Multiplies every coefficient by a field element.
    pub fn mul_scalar(&self, c: &F) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.times(c)).collect();
        Self::clipped(
            self.ctx.clone(),
            self.base.clone(),
            coeffs,
            self.precision.clone(),
        )
    }

    /// Multiplies every coefficient by a rational.
    pub fn scale(&self, r: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.scaled(r)).collect();
        Self::clipped(
            self.ctx.clone(),
            self.base.clone(),
            coeffs,
            self.precision.clone(),
        )
    }

    fn product_precision(&self, other: &Self) -> Rational {
        let a = &self.precision + other.valuation_bound();
        let b = &other.precision + self.valuation_bound();
        a.min(b)
    }

    /// Cauchy product; the result is certified wherever both inputs determine it.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let precision = self.product_precision(other);
        let base = &self.base + &other.base;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ctx.clone(), base, precision));
        }
        let (la, lb) = (self.coeffs.len(), other.coeffs.len());
        let n = steps_below(&base, &precision).min(la + lb - 1);
        let coeffs = (0..n)
            .map(|t| {
                let lo = t.saturating_sub(lb - 1);
                let hi = t.min(la - 1);
                F::sum_of_products(
                    &self.ctx,
                    (lo..=hi).map(|i| (&self.coeffs[i], &other.coeffs[t - i])),
                )
            })
            .collect();
        Ok(Self::clipped(self.ctx.clone(), base, coeffs, precision))
    }

    /// `self · self`, using the symmetry of the convolution.
    pub fn square(&self) -> Self {
        let precision = self.product_precision(self);
        let base = &self.base + &self.base;
        if self.is_zero() {
            return Self::zero(self.ctx.clone(), base, precision);
        }
        let l = self.coeffs.len();
        let n = steps_below(&base, &precision).min(2 * l - 1);
        let two = Rational::from_integer(2.into());
        let coeffs = (0..n)
            .map(|t| {
                // off-diagonal pairs i < t - i, counted twice
                let lo = t.saturating_sub(l - 1);
                let off = match t.checked_sub(1).map(|u| u / 2) {
                    Some(hi) if lo <= hi => F::sum_of_products(
                        &self.ctx,
                        (lo..=hi).map(|i| (&self.coeffs[i], &self.coeffs[t - i])),
                    )
                    .scaled(&two),
                    _ => F::zero_of(&self.ctx),
                };
                if t % 2 == 0 && t / 2 < l {
                    let d = &self.coeffs[t / 2];
                    off.plus(&d.times(d))
                } else {
                    off
                }
            })
            .collect();
        Self::clipped(self.ctx.clone(), base, coeffs, precision)
    }

    /// Non-negative integer power; `x^0` is 1 certified as far as `x` is.
    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        Ok(acc.unwrap_or_else(|| {
            let p = &self.precision - self.valuation_bound();
            Self::one(self.ctx.clone(), p)
        }))
    }

    /// Quotient by leading-coefficient inversion and back-substitution.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let base = &self.base - &other.base;
        let rel_b = &other.precision - &other.base;
        if self.is_zero() {
            let precision = &self.precision - &other.base;
            return Ok(Self::zero(self.ctx.clone(), base, precision));
        }
        let rel_a = &self.precision - &self.base;
        let precision = &base + rel_a.min(rel_b);
        let n = steps_below(&base, &precision);
        let inv0 = other.coeffs[0].inverse()?;
        let lb = other.coeffs.len();
        let mut quot: Vec<F> = Vec::with_capacity(n);
        for t in 0..n {
            let a_t = self
                .coeffs
                .get(t)
                .cloned()
                .unwrap_or_else(|| F::zero_of(&self.ctx));
            let hi = t.min(lb - 1);
            let acc = F::sum_of_products(
                &self.ctx,
                (1..=hi).map(|j| (&other.coeffs[j], &quot[t - j])),
            );
            quot.push(a_t.minus(&acc).times(&inv0));
        }
        Ok(Self::clipped(self.ctx.clone(), base, quot, precision))
    }

    /// The derivation q·d/dq: each coefficient times its full exponent.
    pub fn q_ddq(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scaled(&(&self.base + Rational::from_integer(i.into()))))
            .collect();
        Self::clipped(
            self.ctx.clone(),
            self.base.clone(),
            coeffs,
            self.precision.clone(),
        )
    }

    /// The substitution q ↦ q^s.
    pub fn scale_q(&self, s: u64) -> Self {
        assert!(s >= 1, "scale_q needs a positive power");
        let sr = Rational::from_integer(s.into());
        let step = s as usize;
        let mut coeffs =
            vec![F::zero_of(&self.ctx); self.coeffs.len().saturating_sub(1) * step + 1];
        if self.is_zero() {
            coeffs.clear();
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = c.clone();
        }
        Self::clipped(
            self.ctx.clone(),
            &self.base * &sr,
            coeffs,
            &self.precision * &sr,
        )
    }

    /// Multiplies in place by `1 + c·q^m` (an exact polynomial factor).
    pub fn mul_binomial(&mut self, c: &F, m: usize) {
        if self.is_zero() || c.vanishes() {
            return;
        }
        if m == 0 {
            let f = F::one_of(&self.ctx).plus(c);
            *self = self.mul_scalar(&f);
            return;
        }
        let n = steps_below(&self.base, &self.precision).min(self.coeffs.len() + m);
        self.coeffs.resize(n, F::zero_of(&self.ctx));
        for i in (m..n).rev() {
            let t = self.coeffs[i - m].times(c);
            if !t.vanishes() {
                self.coeffs[i] = self.coeffs[i].plus(&t);
            }
        }
        self.trim_trailing();
    }

    /// Lowers the precision to `min(P, precision)`.
    pub fn truncate(&self, precision: &Rational) -> Self {
        let p = self.precision.clone().min(precision.clone());
        Self::clipped(self.ctx.clone(), self.base.clone(), self.coeffs.clone(), p)
    }

    /// Maps coefficients into another field.
    pub fn try_map<G: Coefficient>(
        &self,
        ctx: G::Ctx,
        f: impl Fn(&F) -> Result<G>,
    ) -> Result<QExpansion<G>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(QExpansion::clipped(
            ctx,
            self.base.clone(),
            coeffs,
            self.precision.clone(),
        ))
    }

    /// Nonzero terms as (exponent, coefficient), in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &F)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.vanishes())
            .map(|(i, c)| (&self.base + Rational::from_integer(i.into()), c))
    }

    /// Exact comparison of all coefficients with exponent below `order`.
    ///
    /// Both series must be certified to at least `order`; this never
    /// silently compares fewer terms than asked.
    pub fn equal_to(&self, other: &Self, order: &Rational) -> Result<Comparison<F>> {
        self.check_ctx(other)?;
        let available = self.precision.clone().min(other.precision.clone());
        if &available < order {
            return Err(Error::InsufficientPrecision {
                available: available.to_string(),
                requested: order.to_string(),
            });
        }
        let zero = F::zero_of(&self.ctx);
        let mut a = self.terms().take_while(|(e, _)| e < order).peekable();
        let mut b = other.terms().take_while(|(e, _)| e < order).peekable();
        loop {
            let next = match (a.peek(), b.peek()) {
                (None, None) => return Ok(Comparison::Equal),
                (Some((ea, _)), None) => (ea.clone(), Ordering::Less),
                (None, Some((eb, _))) => (eb.clone(), Ordering::Greater),
                (Some((ea, _)), Some((eb, _))) => (ea.min(eb).clone(), ea.cmp(eb)),
            };
            match next.1 {
                Ordering::Equal => {
                    let (e, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    if x != y {
                        return Ok(Comparison::Differs(Mismatch {
                            exponent: e,
                            lhs: x.clone(),
                            rhs: y.clone(),
                        }));
                    }
                }
                Ordering::Less => {
                    let (e, x) = a.next().unwrap();
                    return Ok(Comparison::Differs(Mismatch {
                        exponent: e,
                        lhs: x.clone(),
                        rhs: zero,
                    }));
                }
                Ordering::Greater => {
                    let (e, y) = b.next().unwrap();
                    return Ok(Comparison::Differs(Mismatch {
                        exponent: e,
                        lhs: zero,
                        rhs: y.clone(),
                    }));
                }
            }
        }
    }
}

impl<F: Coefficient> PartialEq for QExpansion<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx
            && self.precision == other.precision
            && self.coeffs == other.coeffs
            && (self.coeffs.is_empty() || self.base == other.base)
    }
}

impl<F: Coefficient> fmt::Display for QExpansion<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.terms() {
            write!(f, "({c})*q^({e}) + ")?;
        }
        write!(f, "O(q^({}))", self.precision)
    }
}

impl<F: Coefficient> fmt::Debug for QExpansion<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QExpansion[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    type S = QExpansion<Rational>;

    fn series(base: Rational, cs: &[i64], p: Rational) -> S {
        S::new((), base, cs.iter().map(|&c| int(c)).collect(), p).unwrap()
    }

    fn poly(cs: &[i64], p: i64) -> S {
        series(int(0), cs, int(p))
    }

    #[test]
    fn addition() {
        let a = poly(&[1, 1], 10);
        let b = poly(&[-1, 1], 10);
        assert_eq!(a.add(&b).unwrap(), poly(&[0, 2], 10));
        assert_eq!(a.add(&b).unwrap().base(), &int(1));
        let z = S::zero((), int(0), int(10));
        assert_eq!(a.add(&z).unwrap(), a);
        let x = series(rat(1, 8), &[2, 2], rat(81, 8));
        let y = series(rat(9, 8), &[-2], rat(81, 8));
        let sum = x.add(&y).unwrap();
        assert_eq!(sum.base(), &rat(1, 8));
        assert_eq!(sum.coeffs(), &[int(2)]);
        let bad = series(rat(1, 3), &[1], int(5));
        assert!(matches!(a.add(&bad), Err(Error::IncompatibleBase { .. })));
    }

    #[test]
    fn multiplication() {
        let a = poly(&[1, 1], 10);
        let b = poly(&[1, -1], 10);
        assert_eq!(a.mul(&b).unwrap(), poly(&[1, 0, -1], 10));
        let r = series(rat(1, 8), &[1], int(3));
        let sq = r.mul(&r).unwrap();
        assert_eq!(sq.base(), &rat(1, 4));
        assert_eq!(sq.precision(), &rat(25, 8));
        assert_eq!(r.square(), sq);
    }

    #[test]
    fn euler_product_partial() {
        // Π_{n≤6} (1 - q^n) through q^7, against direct polynomial expansion
        let mut poly_coeffs = [0i64; 22];
        poly_coeffs[0] = 1;
        for n in 1..=6 {
            for i in (n..22).rev() {
                poly_coeffs[i] -= poly_coeffs[i - n];
            }
        }
        let mut prod = S::one((), int(8));
        for n in 1..=6 {
            let mut factor = vec![0; n + 1];
            factor[0] = 1;
            factor[n] = -1;
            prod = prod.mul(&poly(&factor, 8)).unwrap();
        }
        let expect: Vec<Rational> = poly_coeffs[..8].iter().map(|&c| int(c)).collect();
        assert_eq!(prod.coeffs(), &expect[..]);
        assert_eq!(&expect[..8], &[1, -1, -1, 0, 0, 1, 0, 2].map(int)[..]);
    }

    #[test]
    fn division() {
        let a = poly(&[1, 0, -1], 10);
        let b = poly(&[1, -1], 10);
        assert_eq!(a.div(&b).unwrap(), poly(&[1, 1], 10));
        assert_eq!(a.div(&a).unwrap(), S::one((), int(10)));
        let one = S::one((), int(5));
        assert_eq!(one.div(&b).unwrap(), poly(&[1, 1, 1, 1, 1], 5));
        let z = S::zero((), int(0), int(5));
        assert_eq!(one.div(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn q_derivative_and_scaling() {
        assert!(poly(&[7], 10).q_ddq().is_zero());
        let r = series(rat(1, 8), &[1], int(3));
        assert_eq!(r.q_ddq().coeffs(), &[rat(1, 8)]);
        assert_eq!(poly(&[0, 1, 0, 1], 10).q_ddq(), poly(&[0, 1, 0, 3], 10));
        assert_eq!(poly(&[1, 1], 10).scale_q(3), poly(&[1, 0, 0, 1], 30));
        assert_eq!(r.scale_q(2).base(), &rat(1, 4));
        let a = poly(&[1, 1, 1], 10);
        assert_eq!(a.scale_q(4).q_ddq(), a.q_ddq().scale_q(4).scale(&int(4)));
    }

    #[test]
    fn comparison() {
        let a = poly(&[1, 1], 10);
        assert!(a.equal_to(&a, &int(10)).unwrap().is_equal());
        let b = poly(&[1, 2], 10);
        let m = a.equal_to(&b, &int(2)).unwrap();
        assert_eq!(m.mismatch().unwrap().exponent, int(1));
        assert!(a.equal_to(&b, &int(1)).unwrap().is_equal());
        assert!(matches!(
            a.equal_to(&b, &int(11)),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn binomial_factor_matches_mul() {
        let a = poly(&[1, 2, 3], 12);
        let mut b = a.clone();
        b.mul_binomial(&int(-5), 4);
        assert_eq!(b, a.mul(&poly(&[1, 0, 0, 0, -5], 20)).unwrap());
        let mut c = a.clone();
        c.mul_binomial(&int(2), 0);
        assert_eq!(c, a.scale(&int(3)));
    }

    #[test]
    fn rejects_overfull_series() {
        assert!(S::new((), int(0), vec![int(1), int(1)], int(1)).is_err());
        // trailing zeros beyond precision are harmless
        assert!(S::new((), int(0), vec![int(1), int(0)], int(1)).is_ok());
    }
}
