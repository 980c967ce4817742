use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::Rational;

/// Number type the partition engine runs on.
///
/// [`Rational`] is exact. [`F64`] is a binary64 escape hatch for horizons
/// where denominators get too large; runs using it are never certified.
pub trait Scalar: Clone + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Whether comparisons are exact.
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn zero() -> Self;
    fn one() -> Self;

    /// `slope * self + offset`.
    fn affine(&self, slope: &Self, offset: &Self) -> Self;

    /// `self - other`.
    fn minus(&self, other: &Self) -> Self;

    /// `self + other`.
    fn plus(&self, other: &Self) -> Self;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }

    fn zero() -> Self {
        Rational::zero()
    }

    fn one() -> Self {
        Rational::one()
    }

    fn affine(&self, slope: &Self, offset: &Self) -> Self {
        slope * self + offset
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

/// Totally ordered binary64 wrapper.
#[derive(Clone, Copy, Default)]
pub struct F64(pub f64);

impl PartialEq for F64 {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}

impl Eq for F64 {}

impl PartialOrd for F64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for F64 {
    fn cmp(&self, other: &Self) -> Ordering {
        // +0.0 and -0.0 must compare equal for interval endpoints
        if self.0 == other.0 {
            Ordering::Equal
        } else {
            self.0.total_cmp(&other.0)
        }
    }
}

impl fmt::Debug for F64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for F64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for F64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        F64(r.to_f64())
    }

    fn to_f64(&self) -> f64 {
        self.0
    }

    fn zero() -> Self {
        F64(0.0)
    }

    fn one() -> Self {
        F64(1.0)
    }

    fn affine(&self, slope: &Self, offset: &Self) -> Self {
        F64(slope.0 * self.0 + offset.0)
    }

    fn minus(&self, other: &Self) -> Self {
        F64(self.0 - other.0)
    }

    fn plus(&self, other: &Self) -> Self {
        F64(self.0 + other.0)
    }
}

/// An integer read in units of a scale kept elsewhere. The partition engine
/// stores every endpoint of one generation over a common denominator, so
/// arithmetic and comparison reduce to plain integer operations.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScaledInt(pub BigInt);

impl fmt::Debug for ScaledInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ScaledInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for ScaledInt {
    const EXACT: bool = true;

    /// Panics unless `r` is an integer.
    fn from_rational(r: &Rational) -> Self {
        assert!(r.is_integer(), "{r} is not an integer");
        ScaledInt(r.numer().clone())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    fn zero() -> Self {
        ScaledInt(BigInt::zero())
    }

    fn one() -> Self {
        ScaledInt(BigInt::one())
    }

    fn affine(&self, slope: &Self, offset: &Self) -> Self {
        ScaledInt(&slope.0 * &self.0 + &offset.0)
    }

    fn minus(&self, other: &Self) -> Self {
        ScaledInt(&self.0 - &other.0)
    }

    fn plus(&self, other: &Self) -> Self {
        ScaledInt(&self.0 + &other.0)
    }
}
