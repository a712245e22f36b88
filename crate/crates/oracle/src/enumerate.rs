//! Global expectations by enumerating precise systems.
//!
//! The upper expectation of a finitely determined gamble is the largest
//! precise expectation over all precise systems that pick, in every
//! interior situation, a probability inside the forecast. The expectation
//! is affine in each node's probability, so endpoint choices suffice.

use ivrand_core::{DepthGamble, Error, ForecastingSystem, Rational, Result, Situation};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Depth above which endpoint enumeration refuses to run.
pub const DEFAULT_DEPTH_CAP: usize = 4;

/// Leaf weights of the precise system with heads probability `probs[i]` at
/// the interior node stored at `i` (`2^len - 1 + index`), level by level.
fn leaf_weights(probs: &[Rational], depth: usize) -> Vec<Rational> {
    let mut layer = vec![Rational::one()];
    for len in 0..depth {
        let first = (1usize << len) - 1;
        layer = layer
            .iter()
            .enumerate()
            .flat_map(|(k, w)| {
                let p = &probs[first + k];
                [w * (Rational::one() - p), w * p]
            })
            .collect();
    }
    layer
}

/// Least common multiple of the denominators, with every value rescaled to
/// an integer numerator over it.
fn common_denominator<'a>(values: impl Iterator<Item = &'a Rational> + Clone) -> (BigInt, Vec<BigInt>) {
    let den = values.clone().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let nums = values.map(|v| v.numer() * (&den / v.denom())).collect();
    (den, nums)
}

fn interior(depth: usize) -> Vec<Situation> {
    (0..depth)
        .flat_map(|len| (0..(1u64 << len)).map(move |i| Situation::from_index(len, i)))
        .collect()
}

/// Sum over leaves of the gamble times the path probability.
pub fn precise_expectation_by_paths(phi: &ForecastingSystem, g: &DepthGamble) -> Result<Rational> {
    let nodes = interior(g.depth());
    if let Some(s) = nodes.iter().find(|s| !phi.forecast_at(s).is_precise()) {
        return Err(Error::Domain(format!("forecast at {s} is not precise")));
    }
    let probs: Vec<Rational> = nodes.iter().map(|s| phi.forecast_at(s).lo().clone()).collect();
    Ok(leaf_weights(&probs, g.depth()).iter().zip(g.values()).map(|(w, v)| w * v).sum())
}

/// The leaf distributions of every precise system that picks an endpoint of
/// the forecast in each interior situation up to a fixed depth.
///
/// Upper and lower expectations of a gamble of that depth are the largest
/// and smallest of its expectations under these distributions.
#[derive(Clone, Debug)]
pub struct EndpointVertices {
    depth: usize,
    /// Distinct distributions, as sparse `(leaf, numerator)` lists over the
    /// shared denominator `den`.
    vertices: Vec<Vec<(usize, BigInt)>>,
    den: BigInt,
}

impl EndpointVertices {
    pub fn new(phi: &ForecastingSystem, depth: usize, cap: usize) -> Result<Self> {
        if depth > cap {
            return Err(Error::Resource(format!("endpoint enumeration is capped at depth {cap}, got {depth}")));
        }
        let nodes = interior(depth);
        let mut probs: Vec<Rational> = nodes.iter().map(|s| phi.forecast_at(s).lo().clone()).collect();
        let free: Vec<usize> = (0..nodes.len()).filter(|&i| !phi.forecast_at(&nodes[i]).is_precise()).collect();
        let mut vertices = Vec::with_capacity(1 << free.len());
        for mask in 0u64..(1u64 << free.len()) {
            for (bit, &i) in free.iter().enumerate() {
                let f = phi.forecast_at(&nodes[i]);
                probs[i] = if mask >> bit & 1 == 1 { f.hi().clone() } else { f.lo().clone() };
            }
            let sparse: Vec<(usize, Rational)> =
                leaf_weights(&probs, depth).into_iter().enumerate().filter(|(_, w)| !w.is_zero()).collect();
            vertices.push(sparse);
        }
        vertices.sort();
        vertices.dedup();
        let (den, nums) = common_denominator(vertices.iter().flatten().map(|(_, w)| w));
        let mut nums = nums.into_iter();
        let vertices = vertices
            .iter()
            .map(|v| v.iter().map(|(leaf, _)| (*leaf, nums.next().unwrap())).collect())
            .collect();
        Ok(EndpointVertices { depth, vertices, den })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `(lower, upper)` expectation of `g`.
    pub fn bounds(&self, g: &DepthGamble) -> Result<(Rational, Rational)> {
        if g.depth() != self.depth {
            return Err(Error::Domain(format!("gamble depth {} differs from enumeration depth {}", g.depth(), self.depth)));
        }
        // every expectation shares the denominator den·gden, so numerators
        // compare directly
        let (gden, gnums) = common_denominator(g.values().iter());
        let mut values = self.vertices.iter().map(|v| v.iter().map(|(leaf, w)| w * &gnums[*leaf]).sum::<BigInt>());
        let first = values.next().expect("at least one assignment");
        let (lo, hi) = values.fold((first.clone(), first), |(lo, hi), v| {
            if v < lo {
                (v, hi)
            } else if v > hi {
                (lo, v)
            } else {
                (lo, hi)
            }
        });
        let den = &self.den * gden;
        Ok((Rational::new(lo, den.clone()), Rational::new(hi, den)))
    }
}

/// Largest precise expectation over all endpoint assignments.
pub fn upper_by_endpoint_enumeration(phi: &ForecastingSystem, g: &DepthGamble) -> Result<Rational> {
    upper_by_endpoint_enumeration_capped(phi, g, DEFAULT_DEPTH_CAP)
}

pub fn upper_by_endpoint_enumeration_capped(phi: &ForecastingSystem, g: &DepthGamble, cap: usize) -> Result<Rational> {
    Ok(EndpointVertices::new(phi, g.depth(), cap)?.bounds(g)?.1)
}

/// Smallest precise expectation over all endpoint assignments.
pub fn lower_by_endpoint_enumeration(phi: &ForecastingSystem, g: &DepthGamble) -> Result<Rational> {
    Ok(EndpointVertices::new(phi, g.depth(), DEFAULT_DEPTH_CAP)?.bounds(g)?.0)
}
