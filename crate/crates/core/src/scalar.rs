use core::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, Num, Signed, ToPrimitive, Zero};

/// Exact rational numbers with arbitrary precision.
pub type Rational = BigRational;

/// Arithmetic mode of a sample, stack or network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumericMode {
    Float64,
    ExactRational,
}

/// Field operations the network needs, implemented for `f64` and [`Rational`].
pub trait Scalar: Clone + PartialOrd + Debug + Num + Signed {
    const MODE: NumericMode;

    fn from_u128(v: u128) -> Self;

    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn to_f64(&self) -> f64;

    /// `self^sqrt(2)`, or `None` when the mode cannot represent it.
    fn pow_sqrt2(&self) -> Option<Self>;

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    const MODE: NumericMode = NumericMode::Float64;

    fn from_u128(v: u128) -> Self {
        v as f64
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn pow_sqrt2(&self) -> Option<Self> {
        Some(Float::powf(*self, core::f64::consts::SQRT_2))
    }
}

impl Scalar for Rational {
    const MODE: NumericMode = NumericMode::ExactRational;

    fn from_u128(v: u128) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        Rational::from_integer(v.clone())
    }

    fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn pow_sqrt2(&self) -> Option<Self> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_exact_for_rationals() {
        let third = Rational::ratio(1, 3);
        assert_eq!(third.clone() + third.clone() + third, Rational::from_i64(1));
    }

    #[test]
    fn rational_has_no_irrational_power() {
        assert!(Rational::from_i64(2).pow_sqrt2().is_none());
        assert_eq!(1.0f64.pow_sqrt2(), Some(1.0));
    }
}
