//! One-step expectations on the outcome space `{0, 1}`.

use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};
use crate::forecast::IntervalForecast;
use crate::rational::Rational;
#[cfg(test)]
use crate::rational;

/// A gamble on the next outcome: the pair `(f(1), f(0))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalGamble {
    pub on1: Rational,
    pub on0: Rational,
}

impl LocalGamble {
    pub fn new(on1: Rational, on0: Rational) -> Self {
        LocalGamble { on1, on0 }
    }

    pub fn constant(c: Rational) -> Self {
        LocalGamble { on1: c.clone(), on0: c }
    }

    pub fn at(&self, bit: bool) -> &Rational {
        if bit {
            &self.on1
        } else {
            &self.on0
        }
    }

    pub fn max(&self) -> &Rational {
        core::cmp::max(&self.on1, &self.on0)
    }

    pub fn min(&self) -> &Rational {
        core::cmp::min(&self.on1, &self.on0)
    }

    pub fn scale(&self, k: &Rational) -> LocalGamble {
        LocalGamble { on1: &self.on1 * k, on0: &self.on0 * k }
    }

    pub fn shift(&self, mu: &Rational) -> LocalGamble {
        LocalGamble { on1: &self.on1 + mu, on0: &self.on0 + mu }
    }
}

impl Add for &LocalGamble {
    type Output = LocalGamble;
    fn add(self, rhs: &LocalGamble) -> LocalGamble {
        LocalGamble { on1: &self.on1 + &rhs.on1, on0: &self.on0 + &rhs.on0 }
    }
}

impl Sub for &LocalGamble {
    type Output = LocalGamble;
    fn sub(self, rhs: &LocalGamble) -> LocalGamble {
        LocalGamble { on1: &self.on1 - &rhs.on1, on0: &self.on0 - &rhs.on0 }
    }
}

impl Neg for &LocalGamble {
    type Output = LocalGamble;
    fn neg(self) -> LocalGamble {
        LocalGamble { on1: -&self.on1, on0: -&self.on0 }
    }
}

impl Mul<&Rational> for &LocalGamble {
    type Output = LocalGamble;
    fn mul(self, rhs: &Rational) -> LocalGamble {
        self.scale(rhs)
    }
}

/// `p·f(1) + (1 − p)·f(0)`.
pub fn precise_expectation(p: &Rational, f: &LocalGamble) -> Result<Rational> {
    if *p < Rational::zero() || *p > Rational::one() {
        return Err(domain!("probability {p} outside [0, 1]"));
    }
    Ok(expect(p, f))
}

fn expect(p: &Rational, f: &LocalGamble) -> Rational {
    &f.on0 + p * (&f.on1 - &f.on0)
}

/// Maximum of the precise expectation over `p` in the interval. The
/// expectation is affine in `p`, so an endpoint attains it.
pub fn upper_expectation(interval: &IntervalForecast, f: &LocalGamble) -> Rational {
    if f.on1 >= f.on0 {
        expect(interval.hi(), f)
    } else {
        expect(interval.lo(), f)
    }
}

/// Minimum of the precise expectation over `p` in the interval.
pub fn lower_expectation(interval: &IntervalForecast, f: &LocalGamble) -> Rational {
    if f.on1 >= f.on0 {
        expect(interval.lo(), f)
    } else {
        expect(interval.hi(), f)
    }
}

/// Upper expectation of the pair `(v1, v0)` without building a gamble.
pub(crate) fn upper_pair(interval: &IntervalForecast, v1: &Rational, v0: &Rational) -> Rational {
    let d = v1 - v0;
    let p = if d.is_negative() { interval.lo() } else { interval.hi() };
    v0 + p * d
}

pub(crate) fn lower_pair(interval: &IntervalForecast, v1: &Rational, v0: &Rational) -> Rational {
    let d = v1 - v0;
    let p = if d.is_negative() { interval.hi() } else { interval.lo() };
    v0 + p * d
}
