//! Exact rational helpers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary-precision rational number used for every probability and value.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^k`.
pub fn pow2(k: u64) -> Rational {
    Rational::from_integer(BigInt::one() << k)
}

/// `2^-k`.
pub fn inv_pow2(k: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn max(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn min(a: Rational, b: Rational) -> Rational {
    if a <= b {
        a
    } else {
        b
    }
}
