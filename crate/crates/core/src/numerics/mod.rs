//! Exact rational scalars and flagged-interval / rectangle algebra.
//!
//! Everything in the crate is built on [`Rational`]; the [`Scalar`] trait
//! lets the partition engine also run on binary64 ([`F64`]) when rational
//! denominators grow too large.

mod interval;
mod rational;
mod scalar;

pub use interval::{FlaggedInterval, Rect};
pub use rational::{ParseRationalError, Rational};
pub use scalar::{Scalar, ScaledInt, F64};

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericsError {
    #[error("affine slope {0} outside (0, 1)")]
    SlopeOutOfRange(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// Nearest binary64 to `x`.
pub fn to_float(x: &Rational) -> f64 {
    x.to_f64()
}
