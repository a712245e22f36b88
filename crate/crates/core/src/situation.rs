//! Situations (nodes of the binary event tree) and partial cuts.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{domain, Error, Result};

/// A finite bit string: a node of the binary event tree.
///
/// The empty string is the root. Ordering is lexicographic with `0 < 1` and
/// a prefix sorting before its extensions, the same order as the
/// `0`/`1` text form.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Situation(Vec<bool>);

impl Situation {
    pub fn root() -> Self {
        Situation(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Situation(bits)
    }

    /// `n` repetitions of `bit`.
    pub fn repeat(bit: bool, n: usize) -> Self {
        Situation(alloc::vec![bit; n])
    }

    /// The situation of length `len` whose bits spell `index` in binary,
    /// first bit most significant.
    pub fn from_index(len: usize, index: u64) -> Self {
        debug_assert!(len < 64);
        Situation((0..len).map(|i| (index >> (len - 1 - i)) & 1 == 1).collect())
    }

    /// Inverse of [`Situation::from_index`].
    pub fn index(&self) -> u64 {
        debug_assert!(self.0.len() < 64);
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// Same as [`Situation::is_root`].
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn child(&self, bit: bool) -> Self {
        let mut bits = self.0.clone();
        bits.push(bit);
        Situation(bits)
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn pop(&mut self) -> Option<bool> {
        self.0.pop()
    }

    /// The first `k` bits.
    pub fn prefix(&self, k: usize) -> Self {
        Situation(self.0[..k].to_vec())
    }

    /// All prefixes from the root up to and including `self`.
    pub fn prefixes(&self) -> impl Iterator<Item = Situation> + '_ {
        (0..=self.0.len()).map(move |k| self.prefix(k))
    }

    /// `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &Situation) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Situation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("@");
        }
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Situation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "@" {
            return Ok(Situation::root());
        }
        if s.is_empty() {
            return Err(domain!("empty situation (use '@' for the root)"));
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(domain!("invalid character {other:?} in situation {s:?}")),
            })
            .collect::<Result<Vec<_>>>()
            .map(Situation)
    }
}

/// How two situations sit relative to each other in the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    StrictlyPrecedes,
    Equals,
    StrictlyFollows,
    Incomparable,
}

pub fn relation(s: &Situation, t: &Situation) -> Relation {
    if s == t {
        Relation::Equals
    } else if s.is_prefix_of(t) {
        Relation::StrictlyPrecedes
    } else if t.is_prefix_of(s) {
        Relation::StrictlyFollows
    } else {
        Relation::Incomparable
    }
}

/// A finite set of pairwise incomparable situations.
///
/// Members are kept sorted, which places every member's extensions (if any
/// were allowed) directly after it; the antichain check and all range
/// queries rely on that.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PartialCut(Vec<Situation>);

impl PartialCut {
    pub fn empty() -> Self {
        PartialCut(Vec::new())
    }

    /// Builds a cut, rejecting duplicates and comparable pairs.
    pub fn new(members: impl IntoIterator<Item = Situation>) -> Result<Self> {
        let mut members: Vec<Situation> = members.into_iter().collect();
        members.sort();
        for pair in members.windows(2) {
            if pair[0].is_prefix_of(&pair[1]) {
                return Err(domain!(
                    "not a partial cut: {} precedes {}",
                    pair[0],
                    pair[1]
                ));
            }
        }
        Ok(PartialCut(members))
    }

    pub fn singleton(s: Situation) -> Self {
        PartialCut(alloc::vec![s])
    }

    pub fn members(&self) -> &[Situation] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: &Situation) -> bool {
        self.0.binary_search(s).is_ok()
    }

    /// Depth of the deepest member, `None` for the empty cut.
    pub fn max_depth(&self) -> Option<usize> {
        self.0.iter().map(Situation::len).max()
    }

    /// Members strictly shorter than `ell`.
    pub fn shorter_than(&self, ell: usize) -> PartialCut {
        PartialCut(self.0.iter().filter(|s| s.len() < ell).cloned().collect())
    }

    /// Members of length at least `ell`.
    pub fn at_least(&self, ell: usize) -> PartialCut {
        PartialCut(self.0.iter().filter(|s| s.len() >= ell).cloned().collect())
    }

    /// Members that strictly extend `s`.
    pub fn strictly_below(&self, s: &Situation) -> &[Situation] {
        let start = match self.0.binary_search(s) {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        let end = start + self.0[start..].iter().take_while(|t| s.is_prefix_of(t)).count();
        &self.0[start..end]
    }

    /// Whether some member is a prefix of (or equal to) `s`.
    pub fn covers(&self, s: &Situation) -> bool {
        s.prefixes().any(|p| self.contains(&p))
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Situation> {
        self.0.iter()
    }
}

impl<'a> IntoIterator for &'a PartialCut {
    type Item = &'a Situation;
    type IntoIter = core::slice::Iter<'a, Situation>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for PartialCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| alloc::format!("{s}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Where a situation sits relative to a partial cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutStatus {
    /// Some member strictly extends the situation.
    PrecedesStrictly,
    InCut,
    /// Some member is a proper prefix of the situation.
    FollowsStrictly,
    Incomparable,
}

pub fn cut_status(s: &Situation, cut: &PartialCut) -> CutStatus {
    if cut.contains(s) {
        return CutStatus::InCut;
    }
    if (0..s.len()).any(|k| cut.contains(&s.prefix(k))) {
        return CutStatus::FollowsStrictly;
    }
    if !cut.strictly_below(s).is_empty() {
        return CutStatus::PrecedesStrictly;
    }
    CutStatus::Incomparable
}

/// The prefix-minimal elements of `set`, which form a partial cut with the
/// same union of cylinders.
pub fn minimal_antichain(set: impl IntoIterator<Item = Situation>) -> PartialCut {
    let mut all: Vec<Situation> = set.into_iter().collect();
    all.sort();
    all.dedup();
    let mut kept: Vec<Situation> = Vec::with_capacity(all.len());
    for s in all {
        match kept.last() {
            Some(last) if last.is_prefix_of(&s) => {}
            _ => kept.push(s),
        }
    }
    PartialCut(kept)
}
