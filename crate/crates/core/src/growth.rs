//! Growth functions: total, non-decreasing, unbounded maps on the naturals.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{domain, Result};

/// `n ↦ floor((a·n + b) / c)` with `a >= 1`, `c >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl Affine {
    pub fn identity() -> Self {
        Affine { a: 1, b: 0, c: 1 }
    }

    pub fn eval(&self, n: u64) -> u64 {
        let v = (self.a as u128 * n as u128 + self.b as u128) / self.c as u128;
        u64::try_from(v).unwrap_or(u64::MAX)
    }
}

/// A growth function given by a finite table followed by an affine tail.
///
/// `eval(n)` reads the table for `n < prefix.len()` and the affine rule
/// beyond it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrowthFunction {
    prefix: Vec<u64>,
    tail: Affine,
}

impl GrowthFunction {
    pub fn new(prefix: Vec<u64>, tail: Affine) -> Result<Self> {
        if tail.a == 0 || tail.c == 0 {
            return Err(domain!("affine tail needs a >= 1 and c >= 1"));
        }
        if prefix.windows(2).any(|w| w[0] > w[1]) {
            return Err(domain!("growth table is not non-decreasing"));
        }
        if let Some(&last) = prefix.last() {
            if tail.eval(prefix.len() as u64) < last {
                return Err(domain!(
                    "affine tail drops below the table at n = {}",
                    prefix.len()
                ));
            }
        }
        Ok(GrowthFunction { prefix, tail })
    }

    pub fn affine(a: u64, b: u64, c: u64) -> Result<Self> {
        Self::new(Vec::new(), Affine { a, b, c })
    }

    /// `n ↦ n`.
    pub fn identity() -> Self {
        GrowthFunction { prefix: Vec::new(), tail: Affine::identity() }
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> Affine {
        self.tail
    }

    pub fn eval(&self, n: u64) -> u64 {
        match usize::try_from(n).ok().and_then(|i| self.prefix.get(i)) {
            Some(&v) => v,
            None => self.tail.eval(n),
        }
    }

    /// `k ↦ self(mult·k + add)`, which is again a growth function.
    pub fn compose_affine(&self, mult: u64, add: u64) -> Self {
        assert!(mult >= 1);
        let len = self.prefix.len() as u64;
        let prefix = (0..)
            .map(|k: u64| mult * k + add)
            .take_while(|&n| n < len)
            .map(|n| self.prefix[n as usize])
            .collect();
        let Affine { a, b, c } = self.tail;
        let tail = Affine { a: a * mult, b: a * add + b, c };
        GrowthFunction { prefix, tail }
    }
}

impl fmt::Display for GrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("table")?;
        for v in &self.prefix {
            write!(f, " {v}")?;
        }
        write!(f, " ; affine {} {} {}", self.tail.a, self.tail.b, self.tail.c)
    }
}
