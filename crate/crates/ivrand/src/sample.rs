//! Sampling bit sequences from a precise system compatible with a
//! forecasting system.
//!
//! The generator is ChaCha8 seeded from a `u64`. Each step draws one
//! 64-bit word `u` (plus one more for the `uniform` selector) and emits `1`
//! exactly when `u < p·2^64`, compared in exact arithmetic.

use std::str::FromStr;

use ivrand_core::{ForecastingSystem, IntervalForecast, Rational, Situation};
use num_traits::One;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// How the precise probability is chosen inside each interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Selector {
    Low,
    High,
    Mid,
    /// Uniformly at random in the interval, freshly at every step.
    Uniform,
}

impl FromStr for Selector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Selector as clap::ValueEnum>::from_str(s, false)
    }
}

fn word(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from_integer(rng.next_u64().into())
}

fn choose(interval: &IntervalForecast, selector: Selector, rng: &mut ChaCha8Rng, scale: &Rational) -> Rational {
    match selector {
        Selector::Low => interval.lo().clone(),
        Selector::High => interval.hi().clone(),
        Selector::Mid => (interval.lo() + interval.hi()) / Rational::from_integer(2.into()),
        Selector::Uniform => interval.lo() + (interval.hi() - interval.lo()) * word(rng) / scale,
    }
}

/// `n` bits, deterministic in `seed`.
pub fn sample(phi: &ForecastingSystem, selector: Selector, n: usize, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = ivrand_core::rational::pow2(64);
    let mut s = Situation::root();
    let mut bits = Vec::with_capacity(n);
    for _ in 0..n {
        let p = choose(phi.forecast_at(&s), selector, &mut rng, &scale);
        let u = word(&mut rng);
        let bit = p.is_one() || u < p * &scale;
        s.push(bit);
        bits.push(bit);
    }
    bits
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stationary(lo: i64, hi: i64, den: i64) -> ForecastingSystem {
        let r = |v: i64| Rational::new(v.into(), den.into());
        ForecastingSystem::stationary(IntervalForecast::new(r(lo), r(hi)).unwrap())
    }

    #[test]
    fn degenerate_systems() {
        assert_eq!(sample(&stationary(1, 1, 1), Selector::Mid, 4, 0), vec![true; 4]);
        assert_eq!(sample(&stationary(0, 0, 1), Selector::Uniform, 4, 9), vec![false; 4]);
        assert_eq!(sample(&stationary(0, 1, 1), Selector::Low, 6, 3), vec![false; 6]);
        assert_eq!(sample(&stationary(0, 1, 1), Selector::High, 6, 3), vec![true; 6]);
    }

    #[test]
    fn deterministic_and_roughly_fair() {
        let fair = ForecastingSystem::fair_coin();
        let a = sample(&fair, Selector::Mid, 4000, 42);
        assert_eq!(a, sample(&fair, Selector::Mid, 4000, 42));
        assert_ne!(a, sample(&fair, Selector::Mid, 4000, 43));
        let ones = a.iter().filter(|&&b| b).count();
        assert!((1800..2200).contains(&ones), "{ones}");
        let wide = stationary(1, 9, 10);
        let u = sample(&wide, Selector::Uniform, 4000, 1);
        let ones = u.iter().filter(|&&b| b).count();
        assert!((1800..2200).contains(&ones), "{ones}");
    }
}
