//! Martin-Löf direction: threshold sets of a test supermartingale, and the
//! supermartingale `W = ½ Σ_n P̄(A_n | ·)` of a test.

use alloc::vec::Vec;

use num_traits::One;

use super::{validate_ml_test, RandomnessTest};
use crate::error::{contract, Result};
use crate::forecast::{cumulative_bound, ForecastingSystem};
use crate::global::cut_upper_prob;
use crate::martingale::{check_test_supermartingale, Process};
use crate::rational::{self, Rational};
use crate::situation::{minimal_antichain, PartialCut, Situation};

/// Levels `A_n` = first situations where `T` exceeds `2^n`, for every `n`
/// with `2^n` below the maximum of `T`. Ville's inequality keeps each level
/// within its budget.
pub fn martingale_to_test(t: &Process, phi: &ForecastingSystem) -> Result<RandomnessTest> {
    if !check_test_supermartingale(phi, t) {
        return Err(contract!("the process is not a test supermartingale for the forecasting system"));
    }
    let max = t.max_value().clone();
    let mut levels = Vec::new();
    let mut threshold = Rational::one();
    while threshold < max {
        levels.push(minimal_antichain(t.iter().filter(|(_, v)| **v > threshold).map(|(s, _)| s)));
        threshold *= rational::int(2);
    }
    RandomnessTest::new(t.depth(), levels, None)
}

fn check_budgets(phi: &ForecastingSystem, test: &RandomnessTest, big_n: usize) -> Result<()> {
    let prefix = RandomnessTest { levels: test.levels.iter().take(big_n + 1).cloned().collect(), ..test.clone() };
    match validate_ml_test(phi, &prefix).into_iter().find(|r| !r.passes()) {
        Some(r) => Err(contract!(
            "level {} exceeds its budget: upper probability {} > {}",
            r.level,
            r.actual,
            r.budget
        )),
        None => Ok(()),
    }
}

fn w_terms(phi: &ForecastingSystem, cuts: &[PartialCut], s: &Situation) -> Rational {
    let sum: Rational = cuts.iter().map(|c| cut_upper_prob(phi, c, s)).sum();
    sum / rational::int(2)
}

/// `½ Σ_{n<=big_n} P̄(A_n^{<ell} | s)` together with the bound
/// `C_φ(s)·2^-big_n` on the omitted levels.
pub fn test_to_supermartingale_w(
    phi: &ForecastingSystem,
    test: &RandomnessTest,
    big_n: usize,
    ell: usize,
    s: &Situation,
) -> Result<(Rational, Rational)> {
    check_budgets(phi, test, big_n)?;
    let cuts: Vec<PartialCut> = test.levels.iter().take(big_n + 1).map(|c| c.shorter_than(ell)).collect();
    let remainder = cumulative_bound(phi, s)? * rational::inv_pow2(big_n as u64);
    Ok((w_terms(phi, &cuts, s), remainder))
}

/// The W values for levels `0..=big_n` at every situation up to the test's
/// depth, without truncating any level. The root is left as computed; see
/// [`normalize_root`].
pub fn w_process(phi: &ForecastingSystem, test: &RandomnessTest, big_n: usize) -> Result<Process> {
    check_budgets(phi, test, big_n)?;
    let cuts: Vec<PartialCut> = test.levels.iter().take(big_n + 1).cloned().collect();
    Process::from_fn(test.depth(), |s| w_terms(phi, &cuts, s))
}

/// Replaces a root value of at most 1 by exactly 1. Raising the root keeps
/// the supermartingale property there and makes the process a test
/// supermartingale.
pub fn normalize_root(p: Process) -> Result<Process> {
    if *p.root() > Rational::one() {
        return Err(contract!("root value {} exceeds 1", p.root()));
    }
    Ok(p.with_root(Rational::one()))
}
