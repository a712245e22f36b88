//! Global upper and lower expectations by backward recursion on the tree.
//!
//! A gamble that depends only on the first `n` outcomes has a conditional
//! upper expectation computed by applying the local upper expectation of
//! each situation's forecast to the values of its two children, from depth
//! `n` back to the conditioning situation. Upper probabilities of partial
//! cuts use the same recursion, restricted to the situations that strictly
//! precede some member of the cut: every other situation either follows
//! the cut (value 1) or is incomparable with it (value 0).

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::forecast::ForecastingSystem;
use crate::local::{lower_pair, upper_pair};
use crate::martingale::Process;
use crate::rational::{self, Rational};
use crate::rtests::RandomnessTest;
use crate::situation::{cut_status, CutStatus, PartialCut, Situation};

/// A global gamble determined by the first `depth` outcomes, stored as its
/// `2^depth` values indexed by [`Situation::index`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthGamble {
    depth: usize,
    values: Vec<Rational>,
}

impl DepthGamble {
    pub fn new(depth: usize, values: Vec<Rational>) -> Result<Self> {
        if depth >= 32 {
            return Err(domain!("gamble depth {depth} is too large"));
        }
        if values.len() != 1usize << depth {
            return Err(domain!(
                "a depth-{depth} gamble needs {} values, got {}",
                1usize << depth,
                values.len()
            ));
        }
        Ok(DepthGamble { depth, values })
    }

    pub fn from_fn(depth: usize, mut f: impl FnMut(&Situation) -> Rational) -> Result<Self> {
        if depth >= 32 {
            return Err(domain!("gamble depth {depth} is too large"));
        }
        let values = (0..(1u64 << depth)).map(|i| f(&Situation::from_index(depth, i))).collect();
        Ok(DepthGamble { depth, values })
    }

    pub fn constant(depth: usize, c: Rational) -> Result<Self> {
        Self::from_fn(depth, |_| c.clone())
    }

    /// Indicator of the union of the cut's cylinders, at the given depth
    /// (which must reach the deepest member).
    pub fn cut_indicator(cut: &PartialCut, depth: usize) -> Result<Self> {
        if cut.max_depth().is_some_and(|d| d > depth) {
            return Err(domain!("cut is deeper than {depth}"));
        }
        Self::from_fn(depth, |leaf| {
            if cut.covers(leaf) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, leaf: &Situation) -> &Rational {
        &self.values[leaf.index() as usize]
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        DepthGamble { depth: self.depth, values: self.values.iter().map(f).collect() }
    }

    /// Pointwise combination of two gambles of the same depth.
    pub fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        assert_eq!(self.depth, other.depth);
        DepthGamble {
            depth: self.depth,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

fn recurse(phi: &ForecastingSystem, g: &DepthGamble, s: &Situation, upper: bool) -> Result<Rational> {
    let n = g.depth;
    if s.len() > n {
        return Err(domain!(
            "situation {s} is deeper than the gamble's depth {n}; evaluate the gamble there instead"
        ));
    }
    let span = 1usize << (n - s.len());
    let start = s.index() as usize * span;
    let mut layer: Vec<Rational> = g.values[start..start + span].to_vec();
    for level in (s.len()..n).rev() {
        let first = s.index() << (level - s.len());
        layer = layer
            .chunks(2)
            .enumerate()
            .map(|(k, pair)| {
                let node = Situation::from_index(level, first + k as u64);
                let interval = phi.forecast_at(&node);
                if upper {
                    upper_pair(interval, &pair[1], &pair[0])
                } else {
                    lower_pair(interval, &pair[1], &pair[0])
                }
            })
            .collect();
    }
    Ok(layer.pop().expect("one value remains at the conditioning situation"))
}

/// Conditional upper expectation of `g` given the situation `s`.
pub fn cond_upper(phi: &ForecastingSystem, g: &DepthGamble, s: &Situation) -> Result<Rational> {
    recurse(phi, g, s, true)
}

/// Conditional lower expectation of `g` given `s`; equals
/// `-cond_upper(phi, -g, s)`.
pub fn cond_lower(phi: &ForecastingSystem, g: &DepthGamble, s: &Situation) -> Result<Rational> {
    recurse(phi, g, s, false)
}

/// The whole process `s ↦ cond_upper(phi, g, s)` (or its lower twin) on
/// the tree up to the gamble's depth, in a single sweep.
pub fn conditional_process(phi: &ForecastingSystem, g: &DepthGamble, upper: bool) -> Process {
    let n = g.depth;
    let mut levels: Vec<Vec<Rational>> = alloc::vec![g.values.clone()];
    for level in (0..n).rev() {
        let below = levels.last().unwrap();
        let here = below
            .chunks(2)
            .enumerate()
            .map(|(k, pair)| {
                let interval = phi.forecast_at(&Situation::from_index(level, k as u64));
                if upper {
                    upper_pair(interval, &pair[1], &pair[0])
                } else {
                    lower_pair(interval, &pair[1], &pair[0])
                }
            })
            .collect();
        levels.push(here);
    }
    levels.reverse();
    Process::from_levels(levels)
}

/// Recursion over the members strictly below `node`, which are sorted.
fn cut_recurse(phi: &ForecastingSystem, members: &[Situation], node: &mut Situation, upper: bool) -> Rational {
    match members.first() {
        None => return Rational::zero(),
        Some(first) if first.len() == node.len() => return Rational::one(),
        _ => {}
    }
    let depth = node.len();
    let split = members.partition_point(|m| !m.bits()[depth]);
    node.push(false);
    let v0 = cut_recurse(phi, &members[..split], node, upper);
    node.pop();
    node.push(true);
    let v1 = cut_recurse(phi, &members[split..], node, upper);
    node.pop();
    let interval = phi.forecast_at(node);
    if upper {
        upper_pair(interval, &v1, &v0)
    } else {
        lower_pair(interval, &v1, &v0)
    }
}

fn cut_prob(phi: &ForecastingSystem, cut: &PartialCut, s: &Situation, upper: bool) -> Rational {
    match cut_status(s, cut) {
        CutStatus::InCut | CutStatus::FollowsStrictly => Rational::one(),
        CutStatus::Incomparable => Rational::zero(),
        CutStatus::PrecedesStrictly => {
            let mut node = s.clone();
            cut_recurse(phi, cut.strictly_below(s), &mut node, upper)
        }
    }
}

/// Conditional upper probability, given `s`, of reaching the cut.
pub fn cut_upper_prob(phi: &ForecastingSystem, cut: &PartialCut, s: &Situation) -> Rational {
    cut_prob(phi, cut, s, true)
}

/// Conditional lower probability, given `s`, of reaching the cut.
pub fn cut_lower_prob(phi: &ForecastingSystem, cut: &PartialCut, s: &Situation) -> Rational {
    cut_prob(phi, cut, s, false)
}

/// Upper and lower probability of the cylinder of `s`, by the product
/// formula along its prefixes.
pub fn cylinder_bounds(phi: &ForecastingSystem, s: &Situation) -> (Rational, Rational) {
    let mut upper = Rational::one();
    let mut lower = Rational::one();
    let mut prefix = Situation::root();
    for &bit in s.bits() {
        let i = phi.forecast_at(&prefix);
        if bit {
            upper *= i.hi();
            lower *= i.lo();
        } else {
            upper *= Rational::one() - i.lo();
            lower *= Rational::one() - i.hi();
        }
        prefix.push(bit);
    }
    (upper, lower)
}

/// Approximates the upper probability of level `n` of a Schnorr test by the
/// truncation below depth `tail(big_n)`, with an error bound of `2^-big_n`
/// (or 0 when the truncation keeps the whole stored level).
pub fn approx_level_prob(
    phi: &ForecastingSystem,
    test: &RandomnessTest,
    n: usize,
    big_n: u64,
) -> Result<(Rational, Rational)> {
    let tail = test
        .tail()
        .ok_or_else(|| domain!("approximating level probabilities needs a tail bound"))?;
    let level = test
        .level(n)
        .ok_or_else(|| domain!("level {n} is not stored (the test has {} levels)", test.num_levels()))?;
    let ell = usize::try_from(tail.eval(big_n)).unwrap_or(usize::MAX);
    let value = cut_upper_prob(phi, &level.shorter_than(ell), &Situation::root());
    let exact = level.max_depth().is_none_or(|d| ell > d);
    let bound = if exact { Rational::zero() } else { rational::inv_pow2(big_n) };
    Ok((value, bound))
}
