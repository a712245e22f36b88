//! Capital of a strategy battery and randomness-test hits along an observed
//! sequence, as a TSV report.
//!
//! Short sequences (up to the depth cap) are analysed exactly: each
//! strategy's capital process is built on the whole tree and read along the
//! sequence. Longer ones are streamed: capitals are tracked along the single
//! observed path as base-2 logarithms in floating point.

use std::collections::HashMap;
use std::io::Write;

use ivrand_core::{capital_along, kelly_process, ForecastingSystem, IntervalForecast, Kelly, RandomnessTest, Rational, Situation};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{CliError, Result};

pub const DEFAULT_DEPTH_CAP: usize = 12;

/// Kelly strategies with fractions 1/2 and 1 on each outcome.
pub fn default_battery() -> Vec<Kelly> {
    use ivrand_core::Direction::{OnOne, OnZero};
    let half = Rational::new(1.into(), 2.into());
    let one = Rational::from_integer(1.into());
    [(half.clone(), OnOne), (half, OnZero), (one.clone(), OnOne), (one, OnZero)]
        .into_iter()
        .map(|(l, d)| Kelly::new(l, d).expect("fractions lie in [0, 1]"))
        .collect()
}

fn log2_int(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap().log2()
    } else {
        let shift = bits - 60;
        (x >> shift).to_f64().unwrap().log2() + shift as f64
    }
}

/// Base-2 logarithm of a non-negative rational; `-inf` at zero.
pub fn log2_rational(x: &Rational) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        log2_int(x.numer()) - log2_int(x.denom())
    }
}

/// Integers without decimals, everything else with six.
pub fn fmt_log(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:.6}")
    }
}

/// Cumulative hit sets of several tests along a growing prefix.
struct Hits<'a> {
    tests: &'a [RandomnessTest],
    sets: Vec<Vec<usize>>,
    text: String,
}

impl<'a> Hits<'a> {
    fn new(tests: &'a [RandomnessTest]) -> Self {
        let mut h = Hits { tests, sets: vec![Vec::new(); tests.len()], text: String::new() };
        h.render();
        h
    }

    fn observe(&mut self, prefix: &Situation) {
        let mut changed = false;
        for (t, set) in self.tests.iter().zip(&mut self.sets) {
            if prefix.len() > t.depth() {
                continue;
            }
            for (n, level) in t.levels().iter().enumerate() {
                if level.contains(prefix) && !set.contains(&n) {
                    set.push(n);
                    changed = true;
                }
            }
            set.sort_unstable();
        }
        if changed {
            self.render();
        }
    }

    fn render(&mut self) {
        self.text = if self.tests.is_empty() {
            "-".into()
        } else {
            self.sets
                .iter()
                .map(|s| {
                    if s.is_empty() {
                        "-".to_string()
                    } else {
                        s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                    }
                })
                .collect::<Vec<_>>()
                .join(";")
        };
    }

    fn deficiency(&self) -> String {
        if self.tests.is_empty() {
            return "-".into();
        }
        self.sets
            .iter()
            .map(|s| ivrand_core::rtests::deficiency(s).to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io { path: "<stdout>".into(), source: e }
}

/// Writes the report; returns whether the exact mode was used.
pub fn analyze(
    phi: &ForecastingSystem,
    seq: &[bool],
    strategies: &[Kelly],
    tests: &[RandomnessTest],
    depth_cap: usize,
    out: &mut impl Write,
) -> Result<bool> {
    let names: Vec<String> = strategies.iter().map(Kelly::to_string).collect();
    writeln!(out, "#n\tbit\t{}max_log2_capital\ttest_hits", names.iter().map(|n| format!("{n}\t")).collect::<String>()).map_err(io)?;
    let exact = seq.len() <= depth_cap.min(30);
    if exact {
        analyze_exact(phi, seq, strategies, tests, out)?;
    } else {
        analyze_streaming(phi, seq, strategies, tests, out)?;
    }
    Ok(exact)
}

fn analyze_exact(
    phi: &ForecastingSystem,
    seq: &[bool],
    strategies: &[Kelly],
    tests: &[RandomnessTest],
    out: &mut impl Write,
) -> Result<()> {
    let w = Situation::from_bits(seq.to_vec());
    let columns: Vec<Vec<Rational>> = strategies
        .iter()
        .map(|k| Ok(capital_along(&kelly_process(phi, k.lambda(), k.direction(), seq.len())?, &w)?))
        .collect::<Result<_>>()?;
    let mut hits = Hits::new(tests);
    let mut best = Rational::from_integer(1.into());
    let mut prefix = Situation::root();
    for n in 0..=seq.len() {
        if n > 0 {
            prefix.push(seq[n - 1]);
        }
        hits.observe(&prefix);
        for c in &columns {
            if c[n] > best {
                best = c[n].clone();
            }
        }
        let bit = if n == 0 { "-" } else if seq[n - 1] { "1" } else { "0" };
        let caps: String = columns.iter().map(|c| format!("{}\t", c[n])).collect();
        writeln!(out, "{n}\t{bit}\t{caps}{}\t{}", fmt_log(log2_rational(&best)), hits.text).map_err(io)?;
    }
    writeln!(
        out,
        "# summary\tmode=exact\tlength={}\tmax_log2_capital={}\tville_bound={}\tdeficiency={}",
        seq.len(),
        fmt_log(log2_rational(&best)),
        best.recip(),
        hits.deficiency()
    )
    .map_err(io)
}

fn analyze_streaming(
    phi: &ForecastingSystem,
    seq: &[bool],
    strategies: &[Kelly],
    tests: &[RandomnessTest],
    out: &mut impl Write,
) -> Result<()> {
    // log2 of the multiplier for each (forecast, outcome), per strategy
    let mut memo: Vec<HashMap<(*const IntervalForecast, bool), f64>> = vec![HashMap::new(); strategies.len()];
    let mut logs = vec![0.0f64; strategies.len()];
    let mut best = 0.0f64;
    let mut hits = Hits::new(tests);
    let mut prefix = Situation::root();
    let mut line = String::new();
    for n in 0..=seq.len() {
        if n > 0 {
            let interval = phi.forecast_at(&prefix);
            let bit = seq[n - 1];
            for ((k, memo), log) in strategies.iter().zip(&mut memo).zip(&mut logs) {
                let key = (interval as *const IntervalForecast, bit);
                let step = match memo.get(&key) {
                    Some(v) => *v,
                    None => {
                        let v = log2_rational(&k.multiplier(interval, bit)?);
                        memo.insert(key, v);
                        v
                    }
                };
                *log += step;
            }
            prefix.push(bit);
        }
        hits.observe(&prefix);
        line.clear();
        use std::fmt::Write as _;
        let bit = if n == 0 { "-" } else if seq[n - 1] { "1" } else { "0" };
        write!(line, "{n}\t{bit}\t").unwrap();
        for &l in &logs {
            if l > best {
                best = l;
            }
            if l == f64::NEG_INFINITY {
                line.push_str("0\t");
            } else {
                write!(line, "2^{}\t", fmt_log(l)).unwrap();
            }
        }
        writeln!(line, "{}\t{}", fmt_log(best), hits.text).unwrap();
        out.write_all(line.as_bytes()).map_err(io)?;
    }
    writeln!(
        out,
        "# summary\tmode=streaming\tlength={}\tmax_log2_capital={}\tville_bound=2^-{}\tdeficiency={}",
        seq.len(),
        fmt_log(best),
        fmt_log(best),
        hits.deficiency()
    )
    .map_err(io)
}
