use std::collections::BTreeMap;

use ivrand_core::rational::{inv_pow2, ratio};
use ivrand_core::{
    bound_check, check_supermartingale, check_test_supermartingale, kelly_process, rationalize, ville_threshold,
    Direction, ForecastingSystem, IntervalForecast, Process, Situation,
};
use ivrand_oracle::gen::{self, random_non_degenerate_system, random_supermartingale, random_test_supermartingale, NoisySchedule};
use rand::Rng;

#[test]
fn ville_holds_for_generated_supermartingales() {
    let mut rng = gen::rng(10);
    for _ in 0..60 {
        let phi = random_non_degenerate_system(&mut rng, 8);
        let t = random_test_supermartingale(&mut rng, &phi, 8);
        for c in [2, 3, 4, 8] {
            assert!(ville_threshold(&phi, &t, &ratio(c, 1)).unwrap().holds());
        }
    }
}

/// From every situation some path keeps the process at or below its
/// current value down to the last level.
#[test]
fn some_path_never_rises() {
    let mut rng = gen::rng(11);
    for _ in 0..60 {
        let phi = random_non_degenerate_system(&mut rng, 7);
        let root = ratio(rng.gen_range(1..5), 1);
        let m = random_supermartingale(&mut rng, &phi, 7, root);
        for (s, v) in m.iter() {
            let mut node = s.clone();
            while node.len() < m.depth() {
                let one = node.child(true);
                let zero = node.child(false);
                node = if m.value(&one) <= m.value(&zero) { one } else { zero };
                assert!(m.value(&node) <= v, "left {s} upwards at {node}");
            }
        }
    }
}

#[test]
fn cumulative_bound_dominates() {
    let mut rng = gen::rng(12);
    for _ in 0..60 {
        let phi = random_non_degenerate_system(&mut rng, 7);
        let root = ratio(rng.gen_range(1..9), 2);
        let m = random_supermartingale(&mut rng, &phi, 7, root);
        assert_eq!(bound_check(&phi, &m), Ok(true));
    }
}

#[test]
fn rationalized_schedules() {
    let mut rng = gen::rng(13);
    for seed in 0..25 {
        let phi = random_non_degenerate_system(&mut rng, 6);
        let target = random_test_supermartingale(&mut rng, &phi, 6);
        let r = rationalize(&NoisySchedule { target: target.clone(), seed }, &phi, 6).unwrap();
        assert!(check_test_supermartingale(&phi, &r));
        for (s, v) in r.iter() {
            assert!(*v > ratio(0, 1));
            let dev = num_traits::abs(ratio(4, 1) * v - target.value(&s));
            assert!(dev <= ratio(4, 1) * inv_pow2(s.len() as u64));
        }
    }
}

#[test]
fn kelly_strategies_are_test_supermartingales() {
    let mut rng = gen::rng(14);
    for _ in 0..60 {
        let phi = random_non_degenerate_system(&mut rng, 6);
        let lambda = ratio(rng.gen_range(0..=6), 6);
        let dir = if rng.gen_bool(0.5) { Direction::OnOne } else { Direction::OnZero };
        let k = kelly_process(&phi, &lambda, dir, 6).unwrap();
        assert!(check_test_supermartingale(&phi, &k));
    }
}

#[test]
fn narrower_systems_have_fewer_violations() {
    let mut rng = gen::rng(15);
    for _ in 0..60 {
        let depth = 4;
        let wide = random_non_degenerate_system(&mut rng, depth);
        // ψ picks a random sub-interval of φ at every node
        let mut overrides = BTreeMap::new();
        for len in 0..depth {
            for idx in 0..(1u64 << len) {
                let s = Situation::from_index(len, idx);
                let i = wide.forecast_at(&s);
                let t = ratio(rng.gen_range(0..=4), 4);
                let p = i.lo() + (i.hi() - i.lo()) * t;
                overrides.insert(s, IntervalForecast::precise(p).unwrap());
            }
        }
        let narrow = ForecastingSystem::table(IntervalForecast::vacuous(), overrides);
        let m = Process::from_fn(depth, |_| gen::random_rational(&mut rng, 5)).unwrap();
        let under_wide = check_supermartingale(&wide, &m);
        for s in check_supermartingale(&narrow, &m) {
            assert!(under_wide.contains(&s));
        }
    }
}
