//! Interval forecasts and forecasting systems.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::rational::{self, Rational};
use crate::situation::Situation;

/// A closed rational subinterval `[lo, hi]` of `[0, 1]` bounding the
/// probability that the next outcome is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalForecast {
    lo: Rational,
    hi: Rational,
}

impl IntervalForecast {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo < Rational::zero() || hi > Rational::one() || lo > hi {
            return Err(domain!("[{lo}, {hi}] is not a subinterval of [0, 1]"));
        }
        Ok(IntervalForecast { lo, hi })
    }

    pub fn precise(p: Rational) -> Result<Self> {
        Self::new(p.clone(), p)
    }

    /// The vacuous forecast `[0, 1]`.
    pub fn vacuous() -> Self {
        IntervalForecast { lo: Rational::zero(), hi: Rational::one() }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_precise(&self) -> bool {
        self.lo == self.hi
    }

    /// `{0}` or `{1}`: the next outcome is certain.
    pub fn is_degenerate(&self) -> bool {
        self.lo == Rational::one() || self.hi == Rational::zero()
    }

    /// `min(1 - lo, hi)`, the worst-case one-step probability of either
    /// outcome.
    pub fn min_outcome_prob(&self) -> Rational {
        rational::min(Rational::one() - &self.lo, self.hi.clone())
    }

    pub fn contains(&self, p: &Rational) -> bool {
        &self.lo <= p && p <= &self.hi
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &IntervalForecast) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

impl fmt::Display for IntervalForecast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Stationary(IntervalForecast),
    Table {
        default: IntervalForecast,
        overrides: BTreeMap<Situation, IntervalForecast>,
        max_depth: usize,
    },
    Markov {
        order: usize,
        /// `rows[len][index]` is the row for the context of that length
        /// whose bits spell `index`.
        rows: Vec<Vec<IntervalForecast>>,
    },
}

/// A total map from situations to interval forecasts with a finite
/// description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForecastingSystem {
    kind: Kind,
}

impl ForecastingSystem {
    pub fn stationary(interval: IntervalForecast) -> Self {
        ForecastingSystem { kind: Kind::Stationary(interval) }
    }

    /// The precise fair-coin system.
    pub fn fair_coin() -> Self {
        Self::stationary(IntervalForecast::precise(rational::ratio(1, 2)).unwrap())
    }

    pub fn table(default: IntervalForecast, overrides: BTreeMap<Situation, IntervalForecast>) -> Self {
        let max_depth = overrides.keys().map(Situation::len).max().unwrap_or(0);
        ForecastingSystem { kind: Kind::Table { default, overrides, max_depth } }
    }

    /// A system whose forecast depends only on the last `order` outcomes
    /// (or on the whole history while it is shorter than `order`).
    ///
    /// `rows` must contain exactly one forecast for every context of length
    /// at most `order`.
    pub fn markov(order: usize, rows: BTreeMap<Situation, IntervalForecast>) -> Result<Self> {
        if order >= 24 {
            return Err(Error::Config(alloc::format!("markov order {order} is too large")));
        }
        let mut table = Vec::with_capacity(order + 1);
        for len in 0..=order {
            let mut row = Vec::with_capacity(1 << len);
            for index in 0..(1u64 << len) {
                let ctx = Situation::from_index(len, index);
                match rows.get(&ctx) {
                    Some(i) => row.push(i.clone()),
                    None => {
                        return Err(Error::Config(alloc::format!(
                            "markov system of order {order} has no row for context {ctx}"
                        )))
                    }
                }
            }
            table.push(row);
        }
        if let Some(extra) = rows.keys().find(|k| k.len() > order) {
            return Err(Error::Config(alloc::format!(
                "markov row {extra} is longer than the order {order}"
            )));
        }
        Ok(ForecastingSystem { kind: Kind::Markov { order, rows: table } })
    }

    /// The interval forecast in situation `s`.
    pub fn forecast_at(&self, s: &Situation) -> &IntervalForecast {
        match &self.kind {
            Kind::Stationary(i) => i,
            Kind::Table { default, overrides, max_depth } => {
                if s.len() > *max_depth {
                    default
                } else {
                    overrides.get(s).unwrap_or(default)
                }
            }
            Kind::Markov { order, rows } => {
                let len = s.len().min(*order);
                let ctx = &s.bits()[s.len() - len..];
                let index = ctx.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
                &rows[len][index]
            }
        }
    }

    /// Every interval the system can produce.
    pub fn distinct_intervals(&self) -> Vec<&IntervalForecast> {
        match &self.kind {
            Kind::Stationary(i) => alloc::vec![i],
            Kind::Table { default, overrides, .. } => {
                core::iter::once(default).chain(overrides.values()).collect()
            }
            Kind::Markov { rows, .. } => rows.iter().flatten().collect(),
        }
    }

    pub fn is_non_degenerate(&self) -> bool {
        self.distinct_intervals().iter().all(|i| !i.is_degenerate())
    }

    pub fn is_precise(&self) -> bool {
        self.distinct_intervals().iter().all(|i| i.is_precise())
    }

    /// Stationary interval, if this is a stationary system.
    pub fn as_stationary(&self) -> Option<&IntervalForecast> {
        match &self.kind {
            Kind::Stationary(i) => Some(i),
            _ => None,
        }
    }

    /// Default and overrides, if this is a table system.
    pub fn as_table(&self) -> Option<(&IntervalForecast, &BTreeMap<Situation, IntervalForecast>)> {
        match &self.kind {
            Kind::Table { default, overrides, .. } => Some((default, overrides)),
            _ => None,
        }
    }

    /// Order and rows (by context), if this is a Markov system.
    pub fn as_markov(&self) -> Option<(usize, Vec<(Situation, &IntervalForecast)>)> {
        match &self.kind {
            Kind::Markov { order, rows } => Some((
                *order,
                rows.iter()
                    .enumerate()
                    .flat_map(|(len, row)| {
                        row.iter()
                            .enumerate()
                            .map(move |(idx, i)| (Situation::from_index(len, idx as u64), i))
                    })
                    .collect(),
            )),
            _ => None,
        }
    }
}

/// `C_φ(s)`: the product over the strict prefixes of `s` of the reciprocal
/// worst-case outcome probability. Any non-negative supermartingale `M`
/// satisfies `M(s) <= M(root) * C_φ(s)`.
pub fn cumulative_bound(phi: &ForecastingSystem, s: &Situation) -> Result<Rational> {
    let mut bound = Rational::one();
    let mut prefix = Situation::root();
    for &bit in s.bits() {
        let c = phi.forecast_at(&prefix).min_outcome_prob();
        if c.is_zero() {
            return Err(domain!("forecast in {prefix} is degenerate"));
        }
        bound /= c;
        prefix.push(bit);
    }
    Ok(bound)
}

/// Smallest `L >= 1` with `2^L >= x`.
pub fn integer_log_bound(x: &Rational) -> Result<u64> {
    if *x < Rational::one() {
        return Err(domain!("integer_log_bound needs x >= 1, got {x}"));
    }
    let ceil: BigInt = x.ceil().to_integer();
    Ok((ceil - 1u32).bits().max(1))
}
