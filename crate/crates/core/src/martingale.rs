//! Processes on the truncated event tree and the supermartingale toolkit.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed};

use crate::error::{contract, domain, Error, Result};
use crate::forecast::{ForecastingSystem, IntervalForecast};
use crate::global::cut_upper_prob;
use crate::local::upper_pair;
use crate::rational::{self, Rational};
use crate::situation::{minimal_antichain, PartialCut, Situation};

/// A rational-valued map on every situation of length at most `depth`.
///
/// Values are stored level by level: the situation `s` lives at position
/// `2^|s| - 1 + s.index()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Process {
    depth: usize,
    values: Vec<Rational>,
}

fn slot(s: &Situation) -> usize {
    ((1usize << s.len()) - 1) + s.index() as usize
}

impl Process {
    /// Builds a process from its values in storage order.
    pub fn new(depth: usize, values: Vec<Rational>) -> Result<Self> {
        if depth >= 31 {
            return Err(domain!("process depth {depth} is too large to store densely"));
        }
        let expected = (1usize << (depth + 1)) - 1;
        if values.len() != expected {
            return Err(domain!("a depth-{depth} process needs {expected} values, got {}", values.len()));
        }
        Ok(Process { depth, values })
    }

    pub fn from_fn(depth: usize, mut f: impl FnMut(&Situation) -> Rational) -> Result<Self> {
        if depth >= 31 {
            return Err(domain!("process depth {depth} is too large to store densely"));
        }
        let mut values = Vec::with_capacity((1usize << (depth + 1)) - 1);
        for len in 0..=depth {
            for idx in 0..(1u64 << len) {
                values.push(f(&Situation::from_index(len, idx)));
            }
        }
        Ok(Process { depth, values })
    }

    /// `levels[k]` holds the `2^k` values of depth `k`.
    pub(crate) fn from_levels(levels: Vec<Vec<Rational>>) -> Self {
        let depth = levels.len() - 1;
        Process { depth, values: levels.into_iter().flatten().collect() }
    }

    pub fn constant(depth: usize, c: Rational) -> Result<Self> {
        Self::from_fn(depth, |_| c.clone())
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, s: &Situation) -> Option<&Rational> {
        (s.len() <= self.depth).then(|| &self.values[slot(s)])
    }

    /// # Panics
    /// If `s` is deeper than the process.
    pub fn value(&self, s: &Situation) -> &Rational {
        self.get(s).unwrap_or_else(|| panic!("situation {s} is deeper than the process"))
    }

    pub fn root(&self) -> &Rational {
        &self.values[0]
    }

    /// The same process with its root value replaced.
    pub fn with_root(mut self, v: Rational) -> Self {
        self.values[0] = v;
        self
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Process { depth: self.depth, values: self.values.iter().map(f).collect() }
    }

    /// Every situation with its value, in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (Situation, &Rational)> + '_ {
        (0..=self.depth)
            .flat_map(|len| (0..(1u64 << len)).map(move |idx| Situation::from_index(len, idx)))
            .zip(&self.values)
    }

    pub fn max_value(&self) -> &Rational {
        self.values.iter().max().expect("a process has a root")
    }

    pub fn min_value(&self) -> &Rational {
        self.values.iter().min().expect("a process has a root")
    }
}

/// An effective approximation of a real process: `query(s, n)` is within
/// `2^-n` of the target value at `s`.
pub trait ApproximationSchedule {
    fn query(&self, s: &Situation, n: u64) -> Rational;
}

impl<F: Fn(&Situation, u64) -> Rational> ApproximationSchedule for F {
    fn query(&self, s: &Situation, n: u64) -> Rational {
        self(s, n)
    }
}

/// A stored process is its own exact schedule (within its depth).
impl ApproximationSchedule for Process {
    fn query(&self, s: &Situation, _n: u64) -> Rational {
        self.value(s).clone()
    }
}

/// Every situation above the last level whose one-step increment has a
/// positive local upper expectation.
pub fn check_supermartingale(phi: &ForecastingSystem, m: &Process) -> Vec<Situation> {
    let mut bad = Vec::new();
    for len in 0..m.depth {
        for idx in 0..(1u64 << len) {
            let s = Situation::from_index(len, idx);
            let here = m.value(&s);
            let v1 = m.value(&s.child(true)) - here;
            let v0 = m.value(&s.child(false)) - here;
            if upper_pair(phi.forecast_at(&s), &v1, &v0).is_positive() {
                bad.push(s);
            }
        }
    }
    bad
}

/// Root value 1, non-negative, and a supermartingale.
pub fn check_test_supermartingale(phi: &ForecastingSystem, m: &Process) -> bool {
    m.root().is_one() && !m.min_value().is_negative() && check_supermartingale(phi, m).is_empty()
}

/// The capital `M(w[..0]), ..., M(w[..n])` along `w`.
pub fn capital_along(m: &Process, w: &Situation) -> Result<Vec<Rational>> {
    if w.len() > m.depth {
        return Err(domain!("sequence of length {} is deeper than the process ({})", w.len(), m.depth));
    }
    Ok(w.prefixes().map(|p| m.value(&p).clone()).collect())
}

/// Result of checking Ville's inequality at one threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VilleReport {
    /// The first situations at which the process reaches the threshold.
    pub cut: PartialCut,
    /// `T(root) / C`.
    pub bound: Rational,
    /// Upper probability of ever reaching the threshold within the depth.
    pub actual: Rational,
}

impl VilleReport {
    pub fn holds(&self) -> bool {
        self.actual <= self.bound
    }
}

pub fn ville_threshold(phi: &ForecastingSystem, t: &Process, c: &Rational) -> Result<VilleReport> {
    if !c.is_positive() {
        return Err(domain!("threshold {c} must be positive"));
    }
    let cut = minimal_antichain(t.iter().filter(|(_, v)| *v >= c).map(|(s, _)| s));
    let actual = cut_upper_prob(phi, &cut, &Situation::root());
    Ok(VilleReport { cut, bound: t.root() / c, actual })
}

/// Whether `M(s) <= M(root)·C_φ(s)` at every node.
pub fn bound_check(phi: &ForecastingSystem, m: &Process) -> Result<bool> {
    // C_φ is built top-down level by level, checking degeneracy only where
    // it is needed.
    let mut bounds = alloc::vec![Rational::one()];
    for len in 0..=m.depth {
        for (idx, c) in bounds.iter().enumerate() {
            let s = Situation::from_index(len, idx as u64);
            if *m.value(&s) > m.root() * c {
                return Ok(false);
            }
        }
        if len == m.depth {
            break;
        }
        let mut next = Vec::with_capacity(bounds.len() * 2);
        for (idx, c) in bounds.iter().enumerate() {
            let s = Situation::from_index(len, idx as u64);
            let interval = phi.forecast_at(&s);
            if interval.is_degenerate() {
                return Err(domain!("forecast {interval} at {s} is degenerate"));
            }
            let grown = c / interval.min_outcome_prob();
            next.push(grown.clone());
            next.push(grown);
        }
        bounds = next;
    }
    Ok(true)
}

/// The positive rational test supermartingale
/// `R(s) = (q(s, |s|) + 3·2^-|s|) / 4` built from a schedule for a test
/// supermartingale. The result is verified against `phi` before it is
/// returned.
pub fn rationalize(q: &impl ApproximationSchedule, phi: &ForecastingSystem, depth: usize) -> Result<Process> {
    let root = q.query(&Situation::root(), 0);
    if !root.is_one() {
        return Err(contract!("the schedule's root value is {root}, not 1"));
    }
    let four = rational::int(4);
    let r = Process::from_fn(depth, |s| {
        let k = s.len() as u64;
        (q.query(s, k) + rational::int(3) * rational::inv_pow2(k)) / &four
    })?;
    if let Some(s) = check_supermartingale(phi, &r).first() {
        return Err(contract!("the schedule does not approximate a supermartingale: violation at {s}"));
    }
    if let Some((s, v)) = r.iter().find(|(_, v)| !v.is_positive()) {
        return Err(contract!("the schedule does not approximate a non-negative process: R({s}) = {v}"));
    }
    Ok(r)
}

/// Which outcome a [`Kelly`] strategy bets on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    OnOne,
    OnZero,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::OnOne => "on-one",
            Direction::OnZero => "on-zero",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "on-one" => Ok(Direction::OnOne),
            "on-zero" => Ok(Direction::OnZero),
            _ => Err(domain!("unknown direction {s:?} (expected on-one or on-zero)")),
        }
    }
}

/// Bets a fraction `lambda` of the current capital on one outcome, using
/// the gamble the forecast makes available with worst-case loss `-1`:
/// `(x - hi)/hi` on one, `(lo - x)/(1 - lo)` on zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Kelly {
    lambda: Rational,
    direction: Direction,
}

impl Kelly {
    pub fn new(lambda: Rational, direction: Direction) -> Result<Self> {
        if lambda.is_negative() || lambda > Rational::one() {
            return Err(domain!("betting fraction {lambda} outside [0, 1]"));
        }
        Ok(Kelly { lambda, direction })
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Capital multiplier `1 + lambda·g(bit)` under the forecast.
    pub fn multiplier(&self, interval: &IntervalForecast, bit: bool) -> Result<Rational> {
        if interval.is_degenerate() {
            return Err(domain!("cannot bet against the degenerate forecast {interval}"));
        }
        let one = Rational::one();
        let gain = match (self.direction, bit) {
            (Direction::OnOne, true) => (&one - interval.hi()) / interval.hi(),
            (Direction::OnZero, false) => interval.lo() / (&one - interval.lo()),
            _ => -one.clone(),
        };
        Ok(one + &self.lambda * gain)
    }
}

impl fmt::Display for Kelly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kelly({},{})", self.lambda, self.direction)
    }
}

/// The capital process of a [`Kelly`] strategy started with capital 1.
pub fn kelly_process(phi: &ForecastingSystem, lambda: &Rational, direction: Direction, depth: usize) -> Result<Process> {
    let kelly = Kelly::new(lambda.clone(), direction)?;
    if depth >= 31 {
        return Err(domain!("process depth {depth} is too large to store densely"));
    }
    let mut levels = alloc::vec![alloc::vec![Rational::one()]];
    for len in 0..depth {
        let prev = levels.last().unwrap();
        let mut next = Vec::with_capacity(prev.len() * 2);
        for (idx, m) in prev.iter().enumerate() {
            let interval = phi.forecast_at(&Situation::from_index(len, idx as u64));
            next.push(m * kelly.multiplier(interval, false)?);
            next.push(m * kelly.multiplier(interval, true)?);
        }
        levels.push(next);
    }
    Ok(Process::from_levels(levels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::vec;

    fn sit(s: &str) -> Situation {
        s.parse().unwrap()
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

    fn wide() -> ForecastingSystem {
        ForecastingSystem::stationary(IntervalForecast::new(ratio(2, 5), ratio(7, 10)).unwrap())
    }

    #[test]
    fn supermartingale_examples() {
        let fair = ForecastingSystem::fair_coin();
        assert!(check_supermartingale(&fair, &doubler(4)).is_empty());
        let counter = Process::from_fn(3, |s| int(s.len() as i64)).unwrap();
        assert_eq!(check_supermartingale(&fair, &counter).len(), 7);
        assert!(check_supermartingale(&wide(), &Process::constant(4, ratio(5, 2)).unwrap()).is_empty());

        assert!(check_test_supermartingale(&fair, &doubler(4)));
        assert!(!check_test_supermartingale(&fair, &Process::constant(2, int(2)).unwrap()));
        let negative = Process::new(1, vec![int(1), int(-1), int(3)]).unwrap();
        assert!(check_supermartingale(&fair, &negative).is_empty());
        assert!(!check_test_supermartingale(&fair, &negative));
    }

    #[test]
    fn capital_examples() {
        let d = doubler(3);
        assert_eq!(capital_along(&d, &sit("111")).unwrap(), vec![int(1), int(2), int(4), int(8)]);
        assert_eq!(capital_along(&d, &sit("10")).unwrap(), vec![int(1), int(2), int(0)]);
        assert_eq!(capital_along(&Process::constant(3, int(1)).unwrap(), &sit("010")).unwrap(), vec![int(1); 4]);
        assert!(capital_along(&d, &sit("1111")).is_err());
    }

    #[test]
    fn ville_examples() {
        let fair = ForecastingSystem::fair_coin();
        let d = doubler(4);
        let r = ville_threshold(&fair, &d, &int(4)).unwrap();
        assert_eq!(r.cut, PartialCut::singleton(sit("11")));
        assert_eq!((r.bound.clone(), r.actual.clone()), (ratio(1, 4), ratio(1, 4)));
        let r = ville_threshold(&fair, &d, &int(3)).unwrap();
        assert_eq!(r.cut, PartialCut::singleton(sit("11")));
        assert_eq!((r.bound.clone(), r.actual.clone()), (ratio(1, 3), ratio(1, 4)));
        let r = ville_threshold(&wide(), &Process::constant(3, int(1)).unwrap(), &int(1)).unwrap();
        assert_eq!(r.cut, PartialCut::singleton(Situation::root()));
        assert_eq!((r.bound, r.actual), (int(1), int(1)));
        assert!(ville_threshold(&fair, &d, &int(0)).is_err());
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bound_check(&ForecastingSystem::fair_coin(), &doubler(5)), Ok(true));
        assert_eq!(bound_check(&wide(), &Process::constant(5, int(1)).unwrap()), Ok(true));
        let too_fast = Process::from_fn(2, |s| rational::pow2(2 * s.len() as u64)).unwrap();
        assert_eq!(bound_check(&ForecastingSystem::fair_coin(), &too_fast), Ok(false));
        let dead = ForecastingSystem::stationary(IntervalForecast::new(int(0), int(0)).unwrap());
        assert!(bound_check(&dead, &Process::constant(2, int(1)).unwrap()).is_err());
    }

    #[test]
    fn rationalize_examples() {
        let fair = ForecastingSystem::fair_coin();
        let r = rationalize(&|_: &Situation, _: u64| int(1), &fair, 2).unwrap();
        assert_eq!(r.root(), &int(1));
        assert_eq!(r.value(&sit("0")), &ratio(5, 8));
        assert_eq!(r.value(&sit("11")), &ratio(7, 16));
        for (s, v) in r.iter() {
            let dev = num_traits::abs(int(4) * v - int(1));
            assert_eq!(dev, int(3) * rational::inv_pow2(s.len() as u64));
        }
        assert!(check_test_supermartingale(&fair, &r));
        assert!(rationalize(&|_: &Situation, _: u64| int(2), &fair, 2).is_err());
    }

    #[test]
    fn kelly_examples() {
        let fair = ForecastingSystem::fair_coin();
        assert_eq!(kelly_process(&fair, &int(1), Direction::OnOne, 4).unwrap(), doubler(4));
        assert_eq!(
            kelly_process(&wide(), &int(0), Direction::OnZero, 3).unwrap(),
            Process::constant(3, int(1)).unwrap()
        );
        let k = kelly_process(&wide(), &ratio(1, 2), Direction::OnOne, 2).unwrap();
        assert_eq!(k.value(&sit("1")), &ratio(17, 14));
        assert_eq!(k.value(&sit("0")), &ratio(1, 2));
        assert!(check_test_supermartingale(&wide(), &k));
        let z = kelly_process(&wide(), &int(1), Direction::OnZero, 1).unwrap();
        assert_eq!(z.value(&sit("0")), &ratio(5, 3));
        assert!(check_test_supermartingale(&wide(), &z));
        assert!(kelly_process(&fair, &ratio(3, 2), Direction::OnOne, 1).is_err());
        let dead = ForecastingSystem::stationary(IntervalForecast::new(int(1), int(1)).unwrap());
        assert!(kelly_process(&dead, &int(1), Direction::OnOne, 1).is_err());
    }

    #[test]
    fn direction_text() {
        for d in [Direction::OnOne, Direction::OnZero] {
            assert_eq!(alloc::format!("{d}").parse::<Direction>().unwrap(), d);
        }
        assert!("sideways".parse::<Direction>().is_err());
        let k = Kelly::new(int(1), Direction::OnOne).unwrap();
        assert_eq!(alloc::format!("{k}"), "kelly(1,on-one)");
    }
}
