//! Command-line interface.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ivrand_core::rtests::{
    combine_universal, is_ml_test, martingale_to_test, normalize_root, schnorr_test_from_martingale, validate_ml_test,
    validate_schnorr_tail, w_process,
};
use ivrand_core::{
    check_supermartingale, check_test_supermartingale, cumulative_bound, cut_lower_prob, cut_upper_prob,
    lower_expectation, upper_expectation, Direction, ForecastingSystem, IntervalForecast, Kelly, LocalGamble, Process,
    RandomnessTest, Rational, Situation,
};

use crate::analyze::{analyze, default_battery, DEFAULT_DEPTH_CAP};
use crate::error::{CliError, Result};
use crate::format::{self, parse_rational, parse_situation};
use crate::sample::{sample, Selector};

#[derive(Parser, Debug)]
#[command(name = "ivrand", version, about = "Exact expectations, supermartingales and randomness tests for interval forecasts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Local upper and lower expectation of a gamble on the next outcome.
    Local {
        /// Interval endpoints LO HI.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
        interval: Vec<String>,
        /// Gamble values F(1) F(0).
        #[arg(long, num_args = 2, value_names = ["F1", "F0"], allow_hyphen_values = true)]
        gamble: Vec<String>,
    },
    /// Upper (or lower) probability of reaching a partial cut.
    Cutprob {
        #[arg(long)]
        fs: PathBuf,
        /// Comma-separated situations, `@` for the root.
        #[arg(long)]
        cut: String,
        /// Conditioning situation.
        #[arg(long, default_value = "@")]
        cond: String,
        #[arg(long)]
        lower: bool,
    },
    /// Conversions between supermartingales and randomness tests.
    #[command(subcommand)]
    Convert(Convert),
    /// Sample a bit sequence from a compatible precise system.
    Sample {
        #[arg(long)]
        fs: PathBuf,
        #[arg(long, value_enum, default_value = "mid")]
        selector: Selector,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Strategy capitals and test hits along a sequence, as TSV.
    Analyze {
        #[arg(long)]
        fs: PathBuf,
        #[arg(long)]
        seq: PathBuf,
        /// A Kelly strategy: fraction and direction (on-one or on-zero).
        /// Repeatable; defaults to fractions 1/2 and 1 in both directions.
        #[arg(long, num_args = 2, value_names = ["LAMBDA", "DIRECTION"], action = clap::ArgAction::Append)]
        kelly: Vec<String>,
        /// Randomness test file. Repeatable.
        #[arg(long)]
        test: Vec<PathBuf>,
        /// Longest sequence analysed in exact arithmetic.
        #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
        depth_cap: usize,
    },
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Convert {
    /// Threshold-set test of a test supermartingale.
    ToTest {
        #[arg(long)]
        process: PathBuf,
        #[arg(long)]
        fs: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Supermartingale of a Martin-Löf test, summing levels 0..=LEVELS.
    ToMartingale {
        #[arg(long)]
        test: PathBuf,
        #[arg(long)]
        fs: PathBuf,
        #[arg(long)]
        levels: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Test with a tail bound from a test supermartingale crossing a growth
    /// function.
    SchnorrFromMartingale {
        #[arg(long)]
        process: PathBuf,
        #[arg(long)]
        fs: PathBuf,
        /// Growth function `table v0 v1 ... ; affine a b c`.
        #[arg(long)]
        rho: String,
        #[arg(long, default_value_t = 1 << 20)]
        horizon: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Budget-clipped, index-shifted union of several tests.
    Universal {
        #[arg(long)]
        fs: PathBuf,
        #[arg(required = true)]
        tests: Vec<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load_fs(path: &Path) -> Result<ForecastingSystem> {
    format::parse_forecasting_system(&path.display().to_string(), &read(path)?)
}

fn load_process(path: &Path) -> Result<Process> {
    format::parse_process(&path.display().to_string(), &read(path)?)
}

fn load_test(path: &Path) -> Result<RandomnessTest> {
    format::parse_test(&path.display().to_string(), &read(path)?)
}

fn rational_arg(flag: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| CliError::Input(format!("--{flag}: {e}")))
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io { path: "<stdout>".into(), source: e }
}

/// Writes `body` to `--out` or after the report on standard output.
fn emit(out: &mut impl Write, output: &Output, report: &[String], body: &str) -> Result<()> {
    for line in report {
        writeln!(out, "# {line}").map_err(io)?;
    }
    match &output.out {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => out.write_all(body.as_bytes()).map_err(io),
    }
}

fn budget_lines(phi: &ForecastingSystem, test: &RandomnessTest) -> (Vec<String>, Option<String>) {
    let mut lines = Vec::new();
    let mut failure = None;
    for r in validate_ml_test(phi, test) {
        let verdict = if r.passes() { "pass" } else { "FAIL" };
        lines.push(format!("level {} upper probability {} budget {} {verdict}", r.level, r.actual, r.budget));
        if !r.passes() && failure.is_none() {
            failure = Some(format!("level {} has upper probability {} > {}", r.level, r.actual, r.budget));
        }
    }
    if failure.is_none() {
        lines.push("all budgets pass".into());
    }
    (lines, failure)
}

pub fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    match cli.command {
        Command::Local { interval, gamble } => {
            let i = IntervalForecast::new(rational_arg("interval", &interval[0])?, rational_arg("interval", &interval[1])?)
                .map_err(|e| CliError::Input(format!("--interval: {e}")))?;
            let f = LocalGamble::new(rational_arg("gamble", &gamble[0])?, rational_arg("gamble", &gamble[1])?);
            writeln!(out, "upper {}  lower {}", upper_expectation(&i, &f), lower_expectation(&i, &f)).map_err(io)
        }
        Command::Cutprob { fs, cut, cond, lower } => {
            let phi = load_fs(&fs)?;
            let cut = format::parse_cut(&cut).map_err(|e| CliError::Input(format!("--cut: {e}")))?;
            let s = parse_situation(&cond).map_err(|e| CliError::Input(format!("--cond: {e}")))?;
            let p = if lower { cut_lower_prob(&phi, &cut, &s) } else { cut_upper_prob(&phi, &cut, &s) };
            writeln!(out, "{p}").map_err(io)
        }
        Command::Sample { fs, selector, n, seed } => {
            let phi = load_fs(&fs)?;
            let bits: String = sample(&phi, selector, n, seed).into_iter().map(|b| if b { '1' } else { '0' }).collect();
            writeln!(out, "{bits}").map_err(io)
        }
        Command::Analyze { fs, seq, kelly, test, depth_cap } => {
            let phi = load_fs(&fs)?;
            let bits = format::parse_sequence(&read(&seq)?)
                .map_err(|e| CliError::Parse { path: seq.display().to_string(), line: 0, msg: e })?;
            let strategies = if kelly.is_empty() {
                default_battery()
            } else {
                kelly
                    .chunks(2)
                    .map(|pair| {
                        let lambda = rational_arg("kelly", &pair[0])?;
                        let dir: Direction = pair[1].parse().map_err(|e| CliError::Input(format!("--kelly: {e}")))?;
                        Kelly::new(lambda, dir).map_err(|e| CliError::Input(format!("--kelly: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let tests = test.iter().map(|p| load_test(p)).collect::<Result<Vec<_>>>()?;
            let mut buffered = std::io::BufWriter::new(out);
            analyze(&phi, &bits, &strategies, &tests, depth_cap, &mut buffered)?;
            buffered.flush().map_err(io)
        }
        Command::Convert(c) => convert(c, out),
    }
}

fn convert(c: Convert, out: &mut impl Write) -> Result<()> {
    match c {
        Convert::ToTest { process, fs, output } => {
            let phi = load_fs(&fs)?;
            let t = load_process(&process)?;
            if !check_test_supermartingale(&phi, &t) {
                let why = match check_supermartingale(&phi, &t).first() {
                    Some(s) => format!("supermartingale property fails at {s}"),
                    None if !num_traits::One::is_one(t.root()) => format!("root value is {}, not 1", t.root()),
                    None => "the process takes a negative value".to_string(),
                };
                return Err(CliError::Verification(format!("not a test supermartingale: {why}")));
            }
            let test = martingale_to_test(&t, &phi)?;
            let (report, failure) = budget_lines(&phi, &test);
            emit(out, &output, &report, &format::write_test(&test))?;
            failure.map_or(Ok(()), |f| Err(CliError::Verification(f)))
        }
        Convert::ToMartingale { test, fs, levels, output } => {
            let phi = load_fs(&fs)?;
            let test = load_test(&test)?;
            let raw = w_process(&phi, &test, levels)?;
            let remainder = cumulative_bound(&phi, &Situation::root())? * ivrand_core::rational::inv_pow2(levels as u64);
            let mut report = vec![
                format!("levels summed: 0..={levels}"),
                format!("root before normalization: {}", raw.root()),
                format!("remainder bound at root: {remainder}"),
            ];
            let w = normalize_root(raw)?;
            report.push(format!("root after normalization: {}", w.root()));
            let bad = check_supermartingale(&phi, &w);
            report.push(match bad.first() {
                None => "supermartingale check: pass".into(),
                Some(s) => format!("supermartingale check: FAIL at {s}"),
            });
            emit(out, &output, &report, &format::write_process(&w))?;
            match bad.first() {
                None => Ok(()),
                Some(s) => Err(CliError::Verification(format!("supermartingale property fails at {s}"))),
            }
        }
        Convert::SchnorrFromMartingale { process, fs, rho, horizon, output } => {
            let phi = load_fs(&fs)?;
            let t = load_process(&process)?;
            let rho = format::parse_growth(&rho).map_err(|e| CliError::Input(format!("--rho: {e}")))?;
            let test = schnorr_test_from_martingale(&t, &rho, &phi, horizon)?;
            let (mut report, mut failure) = budget_lines(&phi, &test);
            let k_max = test.tail().map_or(0, |e| e.prefix().len() as u64);
            for c in validate_schnorr_tail(&phi, &test, k_max)? {
                let verdict = if c.passes() { "pass" } else { "FAIL" };
                report.push(format!("tail K={} depth>={} upper probability {} budget {} {verdict}", c.k, c.ell, c.actual, c.budget));
                if !c.passes() && failure.is_none() {
                    failure = Some(format!("tail bound fails at K={}", c.k));
                }
            }
            emit(out, &output, &report, &format::write_test(&test))?;
            failure.map_or(Ok(()), |f| Err(CliError::Verification(f)))
        }
        Convert::Universal { fs, tests, output } => {
            let phi = load_fs(&fs)?;
            let family = tests.iter().map(|p| load_test(p)).collect::<Result<Vec<_>>>()?;
            let u = combine_universal(&phi, &family);
            let (report, failure) = budget_lines(&phi, &u);
            debug_assert_eq!(failure.is_none(), is_ml_test(&phi, &u));
            emit(out, &output, &report, &format::write_test(&u))?;
            failure.map_or(Ok(()), |f| Err(CliError::Verification(f)))
        }
    }
}
