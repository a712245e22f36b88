//! Partial sums of non-negative series.

use ivrand_core::Rational;
use num_traits::Zero;

/// Sum of `term(0), ..., term(horizon - 1)` and the last term added.
pub fn series_limit_probe(term: impl Fn(u64) -> Rational, horizon: u64) -> (Rational, Rational) {
    let mut sum = Rational::zero();
    let mut last = Rational::zero();
    for i in 0..horizon {
        last = term(i);
        sum += &last;
    }
    (sum, last)
}
