//! Schnorr direction: tests with tail bounds from a test supermartingale
//! crossing a growth function, and the supermartingale
//! `Z = ½ Σ_{n,k} 2^k·P̄(A_n^{>=ς(k)} | ·)` of a test with a tail bound.

use alloc::vec::Vec;

use num_traits::Zero;

use super::{is_ml_test, RandomnessTest};
use crate::error::{contract, domain, Error, Result};
use crate::forecast::{cumulative_bound, integer_log_bound, ForecastingSystem};
use crate::global::cut_upper_prob;
use crate::growth::{Affine, GrowthFunction};
use crate::martingale::{check_test_supermartingale, Process};
use crate::rational::{self, Rational};
use crate::situation::{minimal_antichain, PartialCut, Situation};

/// Levels `A_n` = first situations `t` with `T(t) >= ρ(|t|) >= 2^n`, and
/// the tail bound `e(big_k) = min{k : ρ(k) >= 2^big_k}`.
///
/// Past the first `big_k` whose `e(big_k)` exceeds the process depth the tail
/// continues as `big_k + e(big_k)`: every truncation beyond the depth is empty, so
/// the bound holds there trivially. `horizon` caps the search for `e(big_k)`.
pub fn schnorr_test_from_martingale(
    t: &Process,
    rho: &GrowthFunction,
    phi: &ForecastingSystem,
    horizon: u64,
) -> Result<RandomnessTest> {
    if !check_test_supermartingale(phi, t) {
        return Err(contract!("the process is not a test supermartingale for the forecasting system"));
    }
    let depth = t.depth();
    let rho_at: Vec<u64> = (0..=depth as u64).map(|k| rho.eval(k)).collect();

    let mut levels = Vec::new();
    for n in 0..64u32 {
        let power = 1u64 << n;
        let threshold = rational::pow2(n as u64);
        let hits: Vec<Situation> = t
            .iter()
            .filter(|(s, v)| {
                let r = rho_at[s.len()];
                r >= power && **v >= Rational::from_integer(r.into()) && **v >= threshold
            })
            .map(|(s, _)| s)
            .collect();
        if hits.is_empty() {
            break;
        }
        levels.push(minimal_antichain(hits));
    }

    let mut table = Vec::new();
    let mut k = 0u64;
    loop {
        let big_k = table.len() as u32;
        let power = 1u64.checked_shl(big_k).filter(|_| big_k < 64);
        while power.is_none_or(|p| rho.eval(k) < p) {
            if k >= horizon || power.is_none() {
                return Err(Error::Horizon(alloc::format!(
                    "the growth function does not reach 2^{big_k} within {horizon} steps"
                )));
            }
            k += 1;
        }
        table.push(k);
        if k > depth as u64 {
            break;
        }
    }
    let last = *table.last().expect("at least one entry");
    let tail = GrowthFunction::new(table, Affine { a: 1, b: last, c: 1 })?;
    RandomnessTest::new(depth, levels, Some(tail))
}

/// `ς(k) = e(4k + 3)`.
pub fn sigma_from_tailbound(e: &GrowthFunction) -> GrowthFunction {
    e.compose_affine(4, 3)
}

/// `sup{k : ς(k) <= ell}`, with the supremum of the empty set taken as 0.
pub fn sigma_sharp(sigma: &GrowthFunction, ell: u64) -> u64 {
    if sigma.eval(0) > ell {
        return 0;
    }
    // ς is unbounded, so doubling finds an upper end.
    let (mut lo, mut hi) = (0u64, 1u64);
    while sigma.eval(hi) <= ell {
        lo = hi;
        hi = hi.saturating_mul(2);
        if lo == u64::MAX {
            return lo;
        }
    }
    // invariant: ς(lo) <= ell < ς(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if sigma.eval(mid) <= ell {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn deepest(test: &RandomnessTest) -> Option<usize> {
    test.levels().iter().filter_map(PartialCut::max_depth).max()
}

/// The non-vanishing terms `(2^k, A_n^{>=ς(k)})` for `k <= k_max`,
/// `n <= n_max`.
fn z_terms(test: &RandomnessTest, sigma: &GrowthFunction, k_max: u64, n_max: usize) -> Vec<(Rational, PartialCut)> {
    let Some(deep) = deepest(test) else { return Vec::new() };
    let mut terms = Vec::new();
    for k in 0..=k_max {
        let ell = sigma.eval(k);
        if ell > deep as u64 {
            break;
        }
        for level in test.levels().iter().take(n_max.saturating_add(1)) {
            let cut = level.at_least(ell as usize);
            if !cut.is_empty() {
                terms.push((rational::pow2(k), cut));
            }
        }
    }
    terms
}

fn z_value(phi: &ForecastingSystem, terms: &[(Rational, PartialCut)], s: &Situation) -> Rational {
    let sum: Rational = terms.iter().map(|(w, c)| w * cut_upper_prob(phi, c, s)).sum();
    sum / rational::int(2)
}

fn sigma_of(test: &RandomnessTest) -> Result<GrowthFunction> {
    test.tail()
        .map(sigma_from_tailbound)
        .ok_or_else(|| domain!("the test has no tail bound"))
}

/// `Σ_n 2^k·P̄(A_n^{>=ς(k)})` over the stored levels; at most `2^-k` for a
/// valid tail bound.
pub fn sigma_tail_sum(phi: &ForecastingSystem, test: &RandomnessTest, k: u64) -> Result<Rational> {
    let sigma = sigma_of(test)?;
    let ell = sigma.eval(k) as usize;
    let root = Situation::root();
    let sum: Rational = test.levels().iter().map(|c| cut_upper_prob(phi, &c.at_least(ell), &root)).sum();
    Ok(sum * rational::pow2(k))
}

/// Z at `s`, truncated to `k <= p = big_n + L` and `n <= q = big_n + 2p + L`
/// with `L = integer_log_bound(C_φ(s))`, and the remainder bound `2^-big_n`
/// (0 when every omitted term of the stored test vanishes).
pub fn schnorr_test_to_supermartingale_z(
    phi: &ForecastingSystem,
    test: &RandomnessTest,
    s: &Situation,
    big_n: u64,
) -> Result<(Rational, Rational)> {
    let sigma = sigma_of(test)?;
    let log = integer_log_bound(&cumulative_bound(phi, s)?)?;
    let p = big_n + log;
    let q = big_n + 2 * p + log;
    let n_max = usize::try_from(q).unwrap_or(usize::MAX);
    let value = z_value(phi, &z_terms(test, &sigma, p, n_max), s);
    let all_k = deepest(test).is_none_or(|d| sigma.eval(p + 1) > d as u64);
    let all_n = n_max.saturating_add(1) >= test.num_levels();
    let remainder = if all_k && all_n { Rational::zero() } else { rational::inv_pow2(big_n) };
    Ok((value, remainder))
}

/// Z at every situation up to the test's depth, summing every term of the
/// stored test. The root is left as computed; see
/// [`normalize_root`](super::normalize_root).
pub fn z_process(phi: &ForecastingSystem, test: &RandomnessTest) -> Result<Process> {
    let sigma = sigma_of(test)?;
    let terms = z_terms(test, &sigma, u64::MAX, usize::MAX);
    Process::from_fn(test.depth(), |s| z_value(phi, &terms, s))
}

/// Tail bound of a Martin-Löf test under a precise system:
/// `e(N) = max_{n <= N} min{ℓ : P(A_n^{>=ℓ}) < 2^-(N+1)}`.
///
/// The table runs until every level's truncation is exactly empty and
/// continues affinely from there.
pub fn derive_tail_bound_precise(phi: &ForecastingSystem, test: &RandomnessTest) -> Result<GrowthFunction> {
    if !phi.is_precise() {
        return Err(domain!("deriving a tail bound needs a precise forecasting system"));
    }
    if !is_ml_test(phi, test) {
        return Err(contract!("the test exceeds a level budget"));
    }
    let root = Situation::root();
    // probs[n][ℓ] = P(A_n^{>=ℓ}) for ℓ up to one past the deepest member.
    let probs: Vec<Vec<Rational>> = test
        .levels()
        .iter()
        .map(|c| {
            let top = c.max_depth().map_or(0, |d| d + 1);
            (0..=top).map(|ell| cut_upper_prob(phi, &c.at_least(ell), &root)).collect()
        })
        .collect();
    let first_below = |row: &[Rational], bound: &Rational| row.iter().position(|p| p < bound).expect("last entry is 0");
    let limit = probs.iter().map(|row| row.iter().position(Zero::is_zero).unwrap()).max().unwrap_or(0);

    let mut table = Vec::new();
    for big_n in 0u64.. {
        let bound = rational::inv_pow2(big_n + 1);
        let e = probs
            .iter()
            .take(usize::try_from(big_n).unwrap_or(usize::MAX).saturating_add(1))
            .map(|row| first_below(row, &bound))
            .max()
            .unwrap_or(0);
        table.push(e as u64);
        if big_n + 1 >= probs.len() as u64 && e == limit {
            break;
        }
    }
    GrowthFunction::new(table, Affine { a: 1, b: limit as u64, c: 1 })
}

#[cfg(test)]
mod tests {
    use super::super::validate_schnorr_tail;
    use super::*;
    use crate::forecast::IntervalForecast;
    use crate::martingale::check_supermartingale;
    use crate::rational::{int, ratio};
    use alloc::vec;

    fn ones(levels: usize, tail: Option<GrowthFunction>) -> RandomnessTest {
        RandomnessTest::from_levels(
            (0..levels).map(|n| PartialCut::singleton(Situation::repeat(true, n + 1))).collect(),
            tail,
        )
    }

    fn doubler(depth: usize) -> Process {
        Process::from_fn(depth, |s| {
            if s.bits().iter().all(|&b| b) {
                rational::pow2(s.len() as u64)
            } else {
                int(0)
            }
        })
        .unwrap()
    }

    fn sit(s: &str) -> Situation {
        s.parse().unwrap()
    }

    #[test]
    fn from_doubler() {
        let fair = ForecastingSystem::fair_coin();
        let t = schnorr_test_from_martingale(&doubler(6), &GrowthFunction::identity(), &fair, 1000).unwrap();
        assert_eq!(t.level(0), Some(&PartialCut::singleton(sit("1"))));
        assert_eq!(t.level(1), Some(&PartialCut::singleton(sit("11"))));
        assert_eq!(t.level(2), Some(&PartialCut::singleton(sit("1111"))));
        assert_eq!(t.num_levels(), 3);
        let e = t.tail().unwrap();
        assert_eq!((0..4).map(|k| e.eval(k)).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
        assert!(validate_schnorr_tail(&fair, &t, 12).unwrap().iter().all(|c| c.passes()));
        assert!(is_ml_test(&fair, &t));
    }

    #[test]
    fn constant_one_gives_the_full_cut() {
        let fair = ForecastingSystem::fair_coin();
        let one = Process::constant(3, int(1)).unwrap();
        let t = schnorr_test_from_martingale(&one, &GrowthFunction::identity(), &fair, 1000).unwrap();
        assert_eq!(t.level(0), Some(&PartialCut::new([sit("0"), sit("1")]).unwrap()));
        assert_eq!(t.num_levels(), 1);
        // the full cut has upper probability 1, which the level-0 budget allows
        assert!(is_ml_test(&fair, &t));
    }

    #[test]
    fn horizon_is_enforced() {
        let fair = ForecastingSystem::fair_coin();
        let slow = GrowthFunction::affine(1, 0, 1000).unwrap();
        let r = schnorr_test_from_martingale(&doubler(3), &slow, &fair, 50);
        assert!(matches!(r, Err(Error::Horizon(_))));
    }

    #[test]
    fn sigma_examples() {
        let s = sigma_from_tailbound(&GrowthFunction::identity());
        assert_eq!((0..4).map(|k| s.eval(k)).collect::<Vec<_>>(), vec![3, 7, 11, 15]);
        let s2 = sigma_from_tailbound(&GrowthFunction::affine(2, 0, 1).unwrap());
        assert_eq!((0..3).map(|k| s2.eval(k)).collect::<Vec<_>>(), vec![6, 14, 22]);

        assert_eq!(sigma_sharp(&GrowthFunction::affine(2, 0, 1).unwrap(), 5), 2);
        assert_eq!(sigma_sharp(&GrowthFunction::affine(1, 3, 1).unwrap(), 2), 0);
        assert_eq!(sigma_sharp(&GrowthFunction::identity(), 0), 0);
        assert_eq!(sigma_sharp(&GrowthFunction::identity(), 1000), 1000);
    }

    #[test]
    fn sigma_guarantee_on_ones() {
        let fair = ForecastingSystem::fair_coin();
        let t = ones(20, Some(GrowthFunction::identity()));
        for k in 0..=2 {
            assert!(sigma_tail_sum(&fair, &t, k).unwrap() <= rational::inv_pow2(k));
        }
    }

    #[test]
    fn z_examples() {
        let fair = ForecastingSystem::fair_coin();
        let empty = RandomnessTest::from_levels(vec![PartialCut::empty(); 3], Some(GrowthFunction::identity()));
        assert_eq!(
            schnorr_test_to_supermartingale_z(&fair, &empty, &Situation::root(), 5).unwrap(),
            (int(0), int(0))
        );
        // 41 levels reach within 2^-32 of the untruncated limit 1/7
        let t = ones(41, Some(GrowthFunction::identity()));
        let (v, r) = schnorr_test_to_supermartingale_z(&fair, &t, &Situation::root(), 30).unwrap();
        assert_eq!(r, int(0));
        assert!(num_traits::abs(v - ratio(1, 7)) <= rational::inv_pow2(30));
        assert!(schnorr_test_to_supermartingale_z(&fair, &ones(3, None), &Situation::root(), 1).is_err());

        let z = z_process(&fair, &ones(8, Some(GrowthFunction::identity()))).unwrap();
        assert!(check_supermartingale(&fair, &z).is_empty());
        assert!(*z.root() <= int(1));
    }

    #[test]
    fn precise_tail_examples() {
        let fair = ForecastingSystem::fair_coin();
        let t = ones(5, None);
        let e = derive_tail_bound_precise(&fair, &t).unwrap();
        assert_eq!(e.eval(0), 2);
        let t = t.with_tail(Some(e));
        assert!(validate_schnorr_tail(&fair, &t, 12).unwrap().iter().all(|c| c.passes()));

        let empty = RandomnessTest::from_levels(vec![PartialCut::empty(); 4], None);
        let e = derive_tail_bound_precise(&fair, &empty).unwrap();
        assert!((0..4).all(|n| e.eval(n) == 0));

        let wide = ForecastingSystem::stationary(IntervalForecast::new(ratio(1, 4), ratio(1, 2)).unwrap());
        assert!(derive_tail_bound_precise(&wide, &ones(2, None)).is_err());
    }
}
