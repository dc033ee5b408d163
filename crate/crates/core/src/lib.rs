//! Exact verification of theta-constant half-sum modular equations.
//!
//! The crate expands θ₂ at rational multiples of π, Dedekind η products and
//! Lambert series as truncated q-expansions with coefficients in ℚ or a
//! cyclotomic field ℚ(ζ_m), and checks identities between them coefficient by
//! coefficient with no tolerance.
//!
//! Layers, bottom up:
//!
//! - [`exact`]: rationals, cyclotomic fields, trigonometric constants.
//! - [`qexp`]: truncated q-series with a rational leading exponent.
//! - [`zjet`]: Taylor jets in z with q-series coefficients.
//! - [`modular`]: η, θ₂ and the Lambert form of ∂z log θ₂.
//! - [`identities`]: the verifiers and the suite runner.
//! - [`selftest`]: invariant groups runnable outside the test harness.

pub mod error;
pub mod exact;
pub mod identities;
pub mod modular;
pub mod qexp;
pub mod selftest;
pub mod zjet;

pub use error::{Error, Result};
