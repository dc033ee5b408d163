//! Exact coefficient fields: the rationals and the cyclotomic fields ℚ(ζ_m).
//!
//! Every series in the crate carries coefficients from one of these fields.
//! The [`Coefficient`] trait is the small field interface the series and jet
//! layers are written against.

mod cyclotomic;
mod trig;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use cyclotomic::{cyclotomic_polynomial, root_of_unity, Cyclotomic, CyclotomicField};
pub use trig::{sum_tan_squared, tan_squared, trig_value, Trig};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Field interface for series coefficients.
///
/// `Ctx` identifies the field an element lives in (unit for ℚ, the conductor
/// for ℚ(ζ_m)); series store it so that zero series still know their field.
/// Binary operations assume both operands share a context; callers that
/// cannot guarantee that use the checked methods on the concrete type.
pub trait Coefficient:
    Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero_of(ctx: &Self::Ctx) -> Self;
    fn from_rational(ctx: &Self::Ctx, r: &Rational) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, r: &Rational) -> Self;
    fn inverse(&self) -> Result<Self>;

    /// Describes the context for error messages (conductor, or 1 for ℚ).
    fn ctx_id(ctx: &Self::Ctx) -> u64;

    fn one_of(ctx: &Self::Ctx) -> Self {
        Self::from_rational(ctx, &<Rational as One>::one())
    }

    /// `Σ a·b` over the pairs. Fields with a cheaper fused form override this.
    fn sum_of_products<'a, I>(ctx: &Self::Ctx, pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a Self, &'a Self)>,
        Self: 'a,
    {
        pairs
            .into_iter()
            .fold(Self::zero_of(ctx), |acc, (a, b)| acc.plus(&a.times(b)))
    }
}

impl Coefficient for Rational {
    type Ctx = ();

    fn ctx(&self) {}

    fn zero_of(_: &()) -> Self {
        <Rational as Zero>::zero()
    }

    fn from_rational(_: &(), r: &Rational) -> Self {
        r.clone()
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn negated(&self) -> Self {
        -self
    }

    fn scaled(&self, r: &Rational) -> Self {
        self * r
    }

    fn inverse(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn ctx_id(_: &()) -> u64 {
        1
    }
}

/// Greatest common divisor of two machine integers.
pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}
