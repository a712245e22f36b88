//! Seeded random instances: forecasting systems, gambles, supermartingales,
//! randomness tests and approximation schedules.

use std::collections::BTreeMap;

use ivrand_core::rational::{inv_pow2, ratio};
use ivrand_core::{
    cut_upper_prob, minimal_antichain, upper_expectation, ApproximationSchedule, DepthGamble, ForecastingSystem,
    IntervalForecast, LocalGamble, PartialCut, Process, RandomnessTest, Rational, Situation,
};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use rand_chacha::ChaCha8Rng as Rng64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The endpoint grid used for random intervals.
pub fn endpoint_grid() -> Vec<Rational> {
    vec![ratio(0, 1), ratio(1, 4), ratio(2, 5), ratio(1, 2), ratio(7, 10), ratio(1, 1)]
}

/// Every interval with both endpoints on the grid.
pub fn grid_intervals(grid: &[Rational]) -> Vec<IntervalForecast> {
    let mut out = Vec::new();
    for (i, lo) in grid.iter().enumerate() {
        for hi in &grid[i..] {
            out.push(IntervalForecast::new(lo.clone(), hi.clone()).unwrap());
        }
    }
    out
}

pub fn random_interval(rng: &mut impl Rng, grid: &[Rational]) -> IntervalForecast {
    let a = grid.choose(rng).unwrap().clone();
    let b = grid.choose(rng).unwrap().clone();
    if a <= b {
        IntervalForecast::new(a, b).unwrap()
    } else {
        IntervalForecast::new(b, a).unwrap()
    }
}

/// A random rational interval with denominator up to 12 that is neither
/// `[0, 0]` nor `[1, 1]`-like.
pub fn random_non_degenerate_interval(rng: &mut impl Rng) -> IntervalForecast {
    loop {
        let d = rng.gen_range(2..=12i64);
        let a = rng.gen_range(0..=d);
        let b = rng.gen_range(0..=d);
        let i = IntervalForecast::new(ratio(a.min(b), d), ratio(a.max(b), d)).unwrap();
        if !i.is_degenerate() {
            return i;
        }
    }
}

pub fn random_precise_interval(rng: &mut impl Rng) -> IntervalForecast {
    let d = rng.gen_range(2..=12i64);
    IntervalForecast::precise(ratio(rng.gen_range(1..d), d)).unwrap()
}

/// A table system with an explicit interval at every situation shorter
/// than `depth`, drawn by `draw`.
pub fn random_table<R: Rng>(
    rng: &mut R,
    depth: usize,
    mut draw: impl FnMut(&mut R) -> IntervalForecast,
) -> ForecastingSystem {
    let default = draw(rng);
    let mut overrides = BTreeMap::new();
    for len in 0..depth {
        for idx in 0..(1u64 << len) {
            overrides.insert(Situation::from_index(len, idx), draw(rng));
        }
    }
    ForecastingSystem::table(default, overrides)
}

pub fn random_non_degenerate_system(rng: &mut impl Rng, depth: usize) -> ForecastingSystem {
    match rng.gen_range(0..3) {
        0 => ForecastingSystem::stationary(random_non_degenerate_interval(rng)),
        1 => random_table(rng, depth.min(6), random_non_degenerate_interval),
        _ => {
            let order = rng.gen_range(1..=2);
            let mut rows = BTreeMap::new();
            for len in 0..=order {
                for idx in 0..(1u64 << len) {
                    rows.insert(Situation::from_index(len, idx), random_non_degenerate_interval(rng));
                }
            }
            ForecastingSystem::markov(order, rows).unwrap()
        }
    }
}

pub fn random_precise_system(rng: &mut impl Rng, depth: usize) -> ForecastingSystem {
    if rng.gen_bool(0.3) {
        ForecastingSystem::stationary(random_precise_interval(rng))
    } else {
        random_table(rng, depth.min(6), random_precise_interval)
    }
}

pub fn random_rational(rng: &mut impl Rng, max_abs: i64) -> Rational {
    ratio(rng.gen_range(-max_abs..=max_abs), rng.gen_range(1..=6))
}

pub fn random_gamble(rng: &mut impl Rng, depth: usize) -> DepthGamble {
    DepthGamble::from_fn(depth, |_| random_rational(rng, 20)).unwrap()
}

/// A non-negative supermartingale with root value `root`: each node splits
/// its value into a random non-negative child pair, rescaled so that the
/// local upper expectation is the node's value (often) or below it.
pub fn random_supermartingale(rng: &mut impl Rng, phi: &ForecastingSystem, depth: usize, root: Rational) -> Process {
    let mut levels: Vec<Vec<Rational>> = vec![vec![root]];
    for len in 0..depth {
        let mut next = Vec::with_capacity(1 << (len + 1));
        for (idx, m) in levels[len].iter().enumerate() {
            let s = Situation::from_index(len, idx as u64);
            let pair = LocalGamble::new(ratio(rng.gen_range(0..=8), 1), ratio(rng.gen_range(0..=8), 1));
            let up = upper_expectation(phi.forecast_at(&s), &pair);
            let slack = if rng.gen_bool(0.6) { Rational::one() } else { ratio(rng.gen_range(1..=4), 4) };
            if up.is_zero() {
                next.push(Rational::zero());
                next.push(Rational::zero());
            } else {
                let scale = m * slack / up;
                next.push(&pair.on0 * &scale);
                next.push(&pair.on1 * &scale);
            }
        }
        levels.push(next);
    }
    Process::new(depth, levels.into_iter().flatten().collect()).unwrap()
}

pub fn random_test_supermartingale(rng: &mut impl Rng, phi: &ForecastingSystem, depth: usize) -> Process {
    random_supermartingale(rng, phi, depth, Rational::one())
}

/// A random Martin-Löf test: each level is grown member by member from a
/// random candidate set, keeping a member only while the level stays
/// within its budget.
pub fn random_ml_test(rng: &mut impl Rng, phi: &ForecastingSystem, levels: usize, depth: usize) -> RandomnessTest {
    let root = Situation::root();
    let cuts = (0..levels)
        .map(|n| {
            let budget = inv_pow2(n as u64);
            let mut candidates: Vec<Situation> = (0..rng.gen_range(0..8))
                .map(|_| {
                    let len = rng.gen_range(1..=depth.max(1));
                    Situation::from_index(len, rng.gen_range(0..(1u64 << len)))
                })
                .collect();
            candidates.shuffle(rng);
            let mut kept: Vec<Situation> = Vec::new();
            for c in candidates {
                let mut trial = kept.clone();
                trial.push(c);
                let cut = minimal_antichain(trial.clone());
                if cut_upper_prob(phi, &cut, &root) <= budget {
                    kept = trial;
                }
            }
            minimal_antichain(kept)
        })
        .collect::<Vec<PartialCut>>();
    RandomnessTest::new(depth, cuts, None).unwrap()
}

/// A schedule for `target` whose answers are off by a seeded amount of at
/// most `2^-n`, and exact at the root.
#[derive(Clone, Debug)]
pub struct NoisySchedule {
    pub target: Process,
    pub seed: u64,
}

impl ApproximationSchedule for NoisySchedule {
    fn query(&self, s: &Situation, n: u64) -> Rational {
        let exact = self.target.value(s).clone();
        if s.is_root() {
            return exact;
        }
        let mix = self.seed ^ (s.index() << 8) ^ ((s.len() as u64) << 40) ^ n.rotate_left(52);
        let j = rng(mix).gen_range(-8i64..=8);
        exact + ratio(j, 8) * inv_pow2(n)
    }
}
