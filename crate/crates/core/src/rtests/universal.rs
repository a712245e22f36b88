//! Budget clipping and the index-shifted union of a family of tests.

use alloc::vec::Vec;

use super::RandomnessTest;
use crate::forecast::ForecastingSystem;
use crate::global::cut_upper_prob;
use crate::rational::{self, Rational};
use crate::situation::{minimal_antichain, PartialCut, Situation};

/// Truncates each level `A_n` to `A_n^{<ℓ*}`, where `ℓ*` is the largest
/// depth stage whose upper probability stays within `2^-(n+1) + 2^-(n+2)`.
///
/// The output always meets every Martin-Löf budget. A level that already
/// meets the budget at every stage is kept as is; the tail bound survives
/// only if no level changed.
pub fn clip_to_budget(phi: &ForecastingSystem, candidate: &RandomnessTest) -> RandomnessTest {
    let root = Situation::root();
    let mut changed = false;
    let levels: Vec<PartialCut> = candidate
        .levels()
        .iter()
        .enumerate()
        .map(|(n, level)| {
            let allowance: Rational = rational::int(3) * rational::inv_pow2(n as u64 + 2);
            let mut depths: Vec<usize> = level.iter().map(Situation::len).collect();
            depths.sort_unstable();
            depths.dedup();
            // Stage `A_n^{<d+1}` first differs from the previous one at each
            // member depth `d`; the first violating stage is cut away.
            for d in depths {
                let stage = level.shorter_than(d + 1);
                if cut_upper_prob(phi, &stage, &root) > allowance {
                    changed = true;
                    return level.shorter_than(d);
                }
            }
            level.clone()
        })
        .collect();
    let tail = if changed { None } else { candidate.tail().cloned() };
    RandomnessTest::new(candidate.depth(), levels, tail).expect("clipping keeps members within depth")
}

/// `U_n` = minimal antichain of the union over `m` of level `n + m + 1` of
/// the clipped `m`-th test, for every `n` some member provides.
pub fn combine_universal(phi: &ForecastingSystem, tests: &[RandomnessTest]) -> RandomnessTest {
    let clipped: Vec<RandomnessTest> = tests.iter().map(|t| clip_to_budget(phi, t)).collect();
    let count = clipped
        .iter()
        .enumerate()
        .map(|(m, t)| t.num_levels().saturating_sub(m + 1))
        .max()
        .unwrap_or(0);
    let levels = (0..count)
        .map(|n| {
            minimal_antichain(
                clipped
                    .iter()
                    .enumerate()
                    .filter_map(|(m, t)| t.level(n + m + 1))
                    .flat_map(|c| c.iter().cloned()),
            )
        })
        .collect();
    let depth = clipped.iter().map(RandomnessTest::depth).max().unwrap_or(0);
    RandomnessTest::new(depth, levels, None).expect("members keep their depth")
}

#[cfg(test)]
mod tests {
    use super::super::is_ml_test;
    use super::*;
    use crate::growth::GrowthFunction;
    use alloc::vec;

    fn ones(levels: usize) -> RandomnessTest {
        RandomnessTest::from_levels(
            (0..levels).map(|n| PartialCut::singleton(Situation::repeat(true, n + 1))).collect(),
            Some(GrowthFunction::identity()),
        )
    }

    fn sit(s: &str) -> Situation {
        s.parse().unwrap()
    }

    #[test]
    fn clip_examples() {
        let fair = ForecastingSystem::fair_coin();
        assert_eq!(clip_to_budget(&fair, &ones(5)), ones(5));
        let root = RandomnessTest::from_levels(vec![PartialCut::singleton(Situation::root())], None);
        assert_eq!(clip_to_budget(&fair, &root).level(0), Some(&PartialCut::empty()));
        let empty = RandomnessTest::from_levels(vec![], None);
        assert_eq!(clip_to_budget(&fair, &empty), empty);

        // stages {1}, {1,01}, {1,01,001}: 1/2, 3/4, 7/8 against 3/4
        let greedy = RandomnessTest::from_levels(vec![PartialCut::new([sit("1"), sit("01"), sit("001")]).unwrap()], None);
        let clipped = clip_to_budget(&fair, &greedy);
        assert_eq!(clipped.level(0), Some(&PartialCut::new([sit("1"), sit("01")]).unwrap()));
        assert_eq!(clip_to_budget(&fair, &clipped), clipped);
        assert!(is_ml_test(&fair, &clipped));
    }

    #[test]
    fn combine_examples() {
        let fair = ForecastingSystem::fair_coin();
        let u = combine_universal(&fair, &[ones(6), ones(6)]);
        assert_eq!(u.num_levels(), 5);
        for n in 0..5 {
            assert_eq!(u.level(n), Some(&PartialCut::singleton(Situation::repeat(true, n + 2))));
        }
        assert!(is_ml_test(&fair, &u));
        let single = combine_universal(&fair, &[ones(4)]);
        assert_eq!(single.levels(), &ones(4).levels()[1..]);
        assert_eq!(combine_universal(&fair, &[]).num_levels(), 0);
    }
}
