use thiserror::Error;

/// Errors raised by the exact arithmetic and series layers.
///
/// Verification failures are never errors; they are reported as data in a
/// [`crate::identities::VerificationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u64, right: u64 },

    #[error("conductor {from} does not divide {to}")]
    ConductorNotDivisible { from: u64, to: u64 },

    #[error("conductor {conductor} cannot represent phases of denominator {needed}")]
    ConductorTooSmall { conductor: u64, needed: u64 },

    #[error("pole: {0}")]
    Pole(String),

    #[error("incompatible exponent classes: bases {left} and {right} differ by a non-integer")]
    IncompatibleBase { left: String, right: String },

    #[error("insufficient precision: certified to {available}, requested {requested}")]
    InsufficientPrecision {
        available: String,
        requested: String,
    },

    #[error("series has no invertible leading term")]
    NotInvertible,

    #[error("expected a zero of order {order}, found nonzero coefficient in slot {slot}")]
    NonzeroLowCoefficient { order: usize, slot: usize },

    #[error("jet degree {have} is too small, need at least {need}")]
    DegreeTooSmall { have: usize, need: usize },

    #[error("coefficient is not rational: {0}")]
    NotRational(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
