//! Randomness tests: leveled families of partial cuts with probability
//! budgets, and the conversions between tests and supermartingales.

mod ml;
mod schnorr;
mod universal;

use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::forecast::ForecastingSystem;
use crate::global::cut_upper_prob;
use crate::growth::GrowthFunction;
use crate::rational::{self, Rational};
use crate::situation::{PartialCut, Situation};

pub use ml::{martingale_to_test, normalize_root, test_to_supermartingale_w, w_process};
pub use schnorr::{
    derive_tail_bound_precise, schnorr_test_from_martingale, schnorr_test_to_supermartingale_z, sigma_from_tailbound,
    sigma_sharp, sigma_tail_sum, z_process,
};
pub use universal::{clip_to_budget, combine_universal};

/// Finitely many levels `A_0, A_1, ...` of a randomness test, each a
/// partial cut of depth at most `depth`, with an optional tail bound.
///
/// Levels beyond the stored ones are empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomnessTest {
    depth: usize,
    levels: Vec<PartialCut>,
    tail: Option<GrowthFunction>,
}

impl RandomnessTest {
    pub fn new(depth: usize, levels: Vec<PartialCut>, tail: Option<GrowthFunction>) -> Result<Self> {
        for (n, level) in levels.iter().enumerate() {
            if let Some(d) = level.max_depth().filter(|&d| d > depth) {
                return Err(domain!("level {n} has a member of depth {d}, beyond the declared depth {depth}"));
            }
        }
        Ok(RandomnessTest { depth, levels, tail })
    }

    /// A test whose depth is that of its deepest member.
    pub fn from_levels(levels: Vec<PartialCut>, tail: Option<GrowthFunction>) -> Self {
        let depth = levels.iter().filter_map(PartialCut::max_depth).max().unwrap_or(0);
        RandomnessTest { depth, levels, tail }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[PartialCut] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Option<&PartialCut> {
        self.levels.get(n)
    }

    pub fn tail(&self) -> Option<&GrowthFunction> {
        self.tail.as_ref()
    }

    pub fn with_tail(mut self, tail: Option<GrowthFunction>) -> Self {
        self.tail = tail;
        self
    }
}

/// Budget check of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelBudget {
    pub level: usize,
    pub budget: Rational,
    pub actual: Rational,
}

impl LevelBudget {
    pub fn passes(&self) -> bool {
        self.actual <= self.budget
    }
}

/// Upper probability of every stored level against its budget `2^-n`.
pub fn validate_ml_test(phi: &ForecastingSystem, test: &RandomnessTest) -> Vec<LevelBudget> {
    let root = Situation::root();
    test.levels
        .iter()
        .enumerate()
        .map(|(n, level)| LevelBudget {
            level: n,
            budget: rational::inv_pow2(n as u64),
            actual: cut_upper_prob(phi, level, &root),
        })
        .collect()
}

pub fn is_ml_test(phi: &ForecastingSystem, test: &RandomnessTest) -> bool {
    validate_ml_test(phi, test).iter().all(LevelBudget::passes)
}

/// Tail-bound check at one `K`: the worst level's upper probability beyond
/// depth `e(K)` against `2^-K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailCheck {
    pub k: u64,
    pub ell: u64,
    /// The level attaining `actual`, if any level is stored.
    pub level: Option<usize>,
    pub budget: Rational,
    pub actual: Rational,
}

impl TailCheck {
    pub fn passes(&self) -> bool {
        self.actual <= self.budget
    }
}

/// Checks `P̄(A_n^{>=e(K)}) <= 2^-K` for every stored level and every
/// `K <= k_max`.
pub fn validate_schnorr_tail(phi: &ForecastingSystem, test: &RandomnessTest, k_max: u64) -> Result<Vec<TailCheck>> {
    let tail = test.tail().ok_or_else(|| domain!("the test has no tail bound"))?;
    let root = Situation::root();
    Ok((0..=k_max)
        .map(|k| {
            let ell = tail.eval(k);
            let depth = usize::try_from(ell).unwrap_or(usize::MAX);
            let mut worst: Option<(usize, Rational)> = None;
            for (n, level) in test.levels.iter().enumerate() {
                let p = cut_upper_prob(phi, &level.at_least(depth), &root);
                if worst.as_ref().is_none_or(|(_, w)| p > *w) {
                    worst = Some((n, p));
                }
            }
            let (level, actual) = match worst {
                Some((n, p)) => (Some(n), p),
                None => (None, rational::zero()),
            };
            TailCheck { k, ell, level, budget: rational::inv_pow2(k), actual }
        })
        .collect())
}

/// Levels `n` such that some prefix of `w` lies in `A_n`, ascending.
pub fn test_hits(test: &RandomnessTest, w: &Situation) -> Vec<usize> {
    test.levels
        .iter()
        .enumerate()
        .filter(|(_, level)| level.covers(w))
        .map(|(n, _)| n)
        .collect()
}

/// One more than the highest level hit, 0 when nothing is hit.
pub fn deficiency(hits: &[usize]) -> usize {
    hits.iter().max().map_or(0, |&n| n + 1)
}
