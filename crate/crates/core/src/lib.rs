//! Exact, finite-depth machinery for algorithmic randomness with interval
//! forecasts.
//!
//! Everything in this crate works on the binary event tree with exact
//! rational arithmetic: interval forecasting systems, local and global
//! upper/lower expectations, supermartingale verification, Martin-Löf and
//! Schnorr randomness tests, and the constructive conversions between test
//! supermartingales and randomness tests.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, sampling and
//! the command-line tool live in the `ivrand` companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod forecast;
pub mod global;
pub mod growth;
pub mod local;
pub mod martingale;
pub mod rational;
pub mod rtests;
pub mod situation;

pub use error::{Error, Result};
pub use forecast::{cumulative_bound, integer_log_bound, ForecastingSystem, IntervalForecast};
pub use global::{conditional_process, 
    approx_level_prob, cond_lower, cond_upper, cut_lower_prob, cut_upper_prob, cylinder_bounds,
    DepthGamble,
};
pub use growth::{Affine, GrowthFunction};
pub use local::{lower_expectation, precise_expectation, upper_expectation, LocalGamble};
pub use martingale::{
    bound_check, capital_along, check_supermartingale, check_test_supermartingale, kelly_process,
    rationalize, ville_threshold, ApproximationSchedule, Direction, Kelly, Process, VilleReport,
};
pub use rational::Rational;
pub use rtests::RandomnessTest;
pub use situation::{cut_status, minimal_antichain, relation, CutStatus, PartialCut, Relation, Situation};
