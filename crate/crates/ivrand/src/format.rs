//! Line-oriented text formats for forecasting systems, processes, tests,
//! growth functions and bit sequences.
//!
//! Every format ignores blank lines and everything after `#`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ivrand_core::{Affine, ForecastingSystem, GrowthFunction, IntervalForecast, PartialCut, Process, RandomnessTest, Rational, Situation};

use crate::error::{CliError, Result};

/// Integer or `p/q`, optionally negative.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let text = text.trim();
    let bad = || format!("malformed rational {text:?}");
    let valid = |t: &str| {
        let t = t.strip_prefix('-').unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let well_formed = match text.split_once('/') {
        Some((n, d)) => valid(n) && digits(d),
        None => valid(text),
    };
    if !well_formed {
        return Err(bad());
    }
    text.parse::<Rational>().map_err(|e| format!("malformed rational {text:?}: {e}"))
}

pub fn parse_situation(text: &str) -> std::result::Result<Situation, String> {
    text.parse::<Situation>().map_err(|e| e.to_string())
}

/// Comma-separated situations; the empty string is the empty cut.
pub fn parse_cut(text: &str) -> std::result::Result<PartialCut, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(PartialCut::empty());
    }
    let members = text.split(',').map(|s| parse_situation(s.trim())).collect::<std::result::Result<Vec<_>, _>>()?;
    PartialCut::new(members).map_err(|e| e.to_string())
}

/// `table v0 v1 ... ; affine a b c`.
pub fn parse_growth(text: &str) -> std::result::Result<GrowthFunction, String> {
    let (table, affine) = text.split_once(';').ok_or("growth function needs `table ... ; affine a b c`")?;
    let mut t = table.split_whitespace();
    if t.next() != Some("table") {
        return Err("growth function must start with `table`".into());
    }
    let prefix = t.map(|v| v.parse::<u64>().map_err(|_| format!("bad table entry {v:?}"))).collect::<std::result::Result<Vec<_>, _>>()?;
    let a: Vec<&str> = affine.split_whitespace().collect();
    let nums = match a.as_slice() {
        ["affine", x, y, z] => [x, y, z].map(|v| v.parse::<u64>().map_err(|_| format!("bad affine coefficient {v:?}"))),
        _ => return Err("growth function needs `affine a b c` after `;`".into()),
    };
    let [a, b, c] = nums;
    GrowthFunction::new(prefix, Affine { a: a?, b: b?, c: c? }).map_err(|e| e.to_string())
}

pub fn parse_sequence(text: &str) -> std::result::Result<Vec<bool>, String> {
    let mut bits = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for ch in strip_comment(line).chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => return Err(format!("line {}: unexpected character {c:?} in sequence", i + 1)),
            }
        }
    }
    Ok(bits)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Meaningful lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l))).filter(|(_, l)| !l.is_empty())
}

struct Ctx<'a> {
    path: &'a str,
}

impl Ctx<'_> {
    fn err(&self, line: usize, msg: impl Into<String>) -> CliError {
        CliError::Parse { path: self.path.to_string(), line, msg: msg.into() }
    }

    fn interval(&self, line: usize, lo: &str, hi: &str) -> Result<IntervalForecast> {
        let lo = parse_rational(lo).map_err(|e| self.err(line, e))?;
        let hi = parse_rational(hi).map_err(|e| self.err(line, e))?;
        IntervalForecast::new(lo, hi).map_err(|e| self.err(line, e.to_string()))
    }

    fn situation(&self, line: usize, s: &str) -> Result<Situation> {
        parse_situation(s).map_err(|e| self.err(line, e))
    }
}

pub fn parse_forecasting_system(path: &str, text: &str) -> Result<ForecastingSystem> {
    let ctx = Ctx { path };
    let mut kind = None;
    let mut interval = None;
    let mut default = None;
    let mut order = None;
    let mut nodes = BTreeMap::new();
    let mut rows = BTreeMap::new();
    let mut last_line = 0;
    for (n, line) in lines(text) {
        last_line = n;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["kind:", k] => kind = Some((n, k.to_string())),
            ["interval:", lo, hi] => interval = Some(ctx.interval(n, lo, hi)?),
            ["default:", lo, hi] => default = Some(ctx.interval(n, lo, hi)?),
            ["order:", k] => order = Some(k.parse::<usize>().map_err(|_| ctx.err(n, format!("bad order {k:?}")))?),
            ["node", s, lo, hi] => {
                if nodes.insert(ctx.situation(n, s)?, ctx.interval(n, lo, hi)?).is_some() {
                    return Err(ctx.err(n, format!("duplicate node {s}")));
                }
            }
            ["row", s, lo, hi] => {
                if rows.insert(ctx.situation(n, s)?, ctx.interval(n, lo, hi)?).is_some() {
                    return Err(ctx.err(n, format!("duplicate row {s}")));
                }
            }
            _ => return Err(ctx.err(n, format!("unrecognised line {line:?}"))),
        }
    }
    let (kn, kind) = kind.ok_or_else(|| ctx.err(last_line, "missing `kind:`"))?;
    let misplaced = |what: &str, present: bool| if present { Err(ctx.err(kn, format!("`{what}` does not belong to kind {kind}"))) } else { Ok(()) };
    match kind.as_str() {
        "stationary" => {
            misplaced("default:", default.is_some())?;
            misplaced("order:", order.is_some())?;
            misplaced("node", !nodes.is_empty())?;
            misplaced("row", !rows.is_empty())?;
            Ok(ForecastingSystem::stationary(interval.ok_or_else(|| ctx.err(kn, "stationary system needs `interval:`"))?))
        }
        "table" => {
            misplaced("interval:", interval.is_some())?;
            misplaced("order:", order.is_some())?;
            misplaced("row", !rows.is_empty())?;
            let default = default.ok_or_else(|| ctx.err(kn, "table system needs `default:`"))?;
            Ok(ForecastingSystem::table(default, nodes))
        }
        "markov" => {
            misplaced("interval:", interval.is_some())?;
            misplaced("default:", default.is_some())?;
            misplaced("node", !nodes.is_empty())?;
            let order = order.ok_or_else(|| ctx.err(kn, "markov system needs `order:`"))?;
            ForecastingSystem::markov(order, rows).map_err(|e| ctx.err(kn, e.to_string()))
        }
        other => Err(ctx.err(kn, format!("unknown kind {other:?} (expected stationary, table or markov)"))),
    }
}

fn interval_text(i: &IntervalForecast) -> String {
    format!("{} {}", i.lo(), i.hi())
}

pub fn write_forecasting_system(phi: &ForecastingSystem) -> String {
    let mut out = String::new();
    if let Some(i) = phi.as_stationary() {
        writeln!(out, "kind: stationary\ninterval: {}", interval_text(i)).unwrap();
    } else if let Some((default, overrides)) = phi.as_table() {
        writeln!(out, "kind: table\ndefault: {}", interval_text(default)).unwrap();
        for (s, i) in overrides {
            writeln!(out, "node {s} {}", interval_text(i)).unwrap();
        }
    } else if let Some((order, rows)) = phi.as_markov() {
        writeln!(out, "kind: markov\norder: {order}").unwrap();
        let mut rows = rows;
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        for (s, i) in rows {
            writeln!(out, "row {s} {}", interval_text(i)).unwrap();
        }
    }
    out
}

pub fn parse_process(path: &str, text: &str) -> Result<Process> {
    let ctx = Ctx { path };
    let mut it = lines(text);
    let (n, header) = it.next().ok_or_else(|| ctx.err(0, "empty process file"))?;
    let depth = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["depth:", d] => d.parse::<usize>().map_err(|_| ctx.err(n, format!("bad depth {d:?}")))?,
        _ => return Err(ctx.err(n, "process file must start with `depth: D`")),
    };
    if depth >= 31 {
        return Err(ctx.err(n, format!("depth {depth} is too large")));
    }
    let mut values: Vec<Option<Rational>> = vec![None; (1usize << (depth + 1)) - 1];
    let mut last = n;
    for (n, line) in it {
        last = n;
        let words: Vec<&str> = line.split_whitespace().collect();
        let [s, v] = words.as_slice() else {
            return Err(ctx.err(n, "expected `<situation> <value>`"));
        };
        let s = ctx.situation(n, s)?;
        if s.len() > depth {
            return Err(ctx.err(n, format!("situation {s} is deeper than {depth}")));
        }
        let slot = (1usize << s.len()) - 1 + s.index() as usize;
        if values[slot].is_some() {
            return Err(ctx.err(n, format!("duplicate value for {s}")));
        }
        values[slot] = Some(parse_rational(v).map_err(|e| ctx.err(n, e))?);
    }
    let mut full = Vec::with_capacity(values.len());
    for (len, idx) in (0..=depth).flat_map(|len| (0..(1u64 << len)).map(move |i| (len, i))) {
        let slot = (1usize << len) - 1 + idx as usize;
        match values[slot].take() {
            Some(v) => full.push(v),
            None => return Err(ctx.err(last, format!("missing value for {}", Situation::from_index(len, idx)))),
        }
    }
    Ok(Process::new(depth, full)?)
}

pub fn write_process(p: &Process) -> String {
    let mut out = format!("depth: {}\n", p.depth());
    for (s, v) in p.iter() {
        writeln!(out, "{s} {v}").unwrap();
    }
    out
}

pub fn parse_test(path: &str, text: &str) -> Result<RandomnessTest> {
    let ctx = Ctx { path };
    let mut levels: Option<(usize, usize)> = None;
    let mut depth: Option<usize> = None;
    let mut tail = None;
    let mut members: Vec<Vec<Situation>> = Vec::new();
    let mut last = 0;
    for (n, line) in lines(text) {
        last = n;
        if let Some(growth) = line.strip_prefix("tail:") {
            tail = Some(parse_growth(growth.trim()).map_err(|e| ctx.err(n, e))?);
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["levels:", v] => {
                let count = v.parse::<usize>().map_err(|_| ctx.err(n, format!("bad level count {v:?}")))?;
                levels = Some((n, count));
                members = vec![Vec::new(); count];
            }
            ["depth:", v] => depth = Some(v.parse::<usize>().map_err(|_| ctx.err(n, format!("bad depth {v:?}")))?),
            ["level", k, s] => {
                let (_, count) = levels.ok_or_else(|| ctx.err(n, "`levels:` must come before the first level line"))?;
                let k = k.parse::<usize>().map_err(|_| ctx.err(n, format!("bad level index {k:?}")))?;
                if k >= count {
                    return Err(ctx.err(n, format!("level {k} is beyond the declared {count} levels")));
                }
                let s = ctx.situation(n, s)?;
                if depth.is_some_and(|d| s.len() > d) {
                    return Err(ctx.err(n, format!("situation {s} is deeper than the declared depth")));
                }
                members[k].push(s);
            }
            _ => return Err(ctx.err(n, format!("unrecognised line {line:?}"))),
        }
    }
    let (ln, _) = levels.ok_or_else(|| ctx.err(last, "missing `levels:`"))?;
    let depth = depth.ok_or_else(|| ctx.err(ln, "missing `depth:`"))?;
    let cuts = members
        .into_iter()
        .enumerate()
        .map(|(k, m)| PartialCut::new(m).map_err(|e| ctx.err(ln, format!("level {k}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    RandomnessTest::new(depth, cuts, tail).map_err(|e| ctx.err(ln, e.to_string()))
}

/// Canonical form: header, then levels ascending with members in
/// lexicographic order.
pub fn write_test(t: &RandomnessTest) -> String {
    let mut out = format!("levels: {}\ndepth: {}\n", t.num_levels(), t.depth());
    if let Some(e) = t.tail() {
        writeln!(out, "tail: {e}").unwrap();
    }
    for (n, level) in t.levels().iter().enumerate() {
        for s in level {
            writeln!(out, "level {n} {s}").unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("7/10"), Ok(r(7, 10)));
        assert_eq!(parse_rational("-3"), Ok(r(-3, 1)));
        assert_eq!(parse_rational("4/6"), Ok(r(2, 3)));
        for bad in ["", "1/0", "x", "1/-2", "1.5", "--1", "/3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn systems_round_trip() {
        let texts = [
            "kind: stationary\ninterval: 2/5 7/10\n",
            "kind: table\ndefault: 1/2 1/2\nnode @ 2/5 7/10\nnode 01 0 1\n",
            "kind: markov\norder: 1\nrow @ 1/2 1/2\nrow 0 1/2 1/2\nrow 1 3/10 3/10\n",
        ];
        for t in texts {
            let phi = parse_forecasting_system("t", t).unwrap();
            assert_eq!(write_forecasting_system(&phi), t);
        }
        let phi = parse_forecasting_system("t", texts[2]).unwrap();
        assert_eq!(phi.forecast_at(&"01".parse().unwrap()).hi(), &r(3, 10));
    }

    #[test]
    fn system_errors() {
        for bad in [
            "interval: 0 1\n",
            "kind: stationary\n",
            "kind: stationary\ninterval: 1 0\n",
            "kind: markov\norder: 1\nrow @ 0 1\nrow 0 0 1\n",
            "kind: table\ndefault: 0 1\nnode 2 0 1\n",
            "kind: nope\n",
            "kind: stationary\ninterval: 0 1\norder: 2\n",
        ] {
            assert!(parse_forecasting_system("t", bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn processes_round_trip() {
        let text = "depth: 1\n@ 1\n0 0\n1 2\n";
        let p = parse_process("p", text).unwrap();
        assert_eq!(write_process(&p), text);
        assert!(parse_process("p", "depth: 1\n@ 1\n1 2\n").is_err());
        assert!(parse_process("p", "depth: 1\n@ 1\n0 0\n0 1\n1 2\n").is_err());
        assert!(parse_process("p", "depth: 1\n@ 1\n0 0\n1 2\n11 3\n").is_err());
    }

    #[test]
    fn tests_round_trip() {
        let text = "levels: 3\ndepth: 4\ntail: table 1 2 ; affine 1 1 1\nlevel 0 0\nlevel 0 1\nlevel 1 11\nlevel 2 1101\n";
        let t = parse_test("t", text).unwrap();
        assert_eq!(write_test(&t), text);
        // comments and member order do not matter
        let shuffled = "# test\ndepth: 4\nlevels: 3\nlevel 0 1\nlevel 2 1101 # deep\nlevel 0 0\nlevel 1 11\ntail: table 1 2 ; affine 1 1 1\n";
        assert_eq!(write_test(&parse_test("t", shuffled).unwrap()), text);
        assert!(parse_test("t", "levels: 1\ndepth: 2\nlevel 0 1\nlevel 0 11\n").is_err());
        assert!(parse_test("t", "levels: 1\ndepth: 1\nlevel 0 11\n").is_err());
        assert!(parse_test("t", "levels: 1\ndepth: 1\nlevel 1 1\n").is_err());
    }

    #[test]
    fn growth_and_sequences() {
        let g = parse_growth("table 0 2 ; affine 2 1 1").unwrap();
        assert_eq!((0..4).map(|n| g.eval(n)).collect::<Vec<_>>(), vec![0, 2, 5, 7]);
        assert!(parse_growth("affine 1 0 1").is_err());
        assert!(parse_growth("table 3 1 ; affine 1 0 1").is_err());
        assert_eq!(parse_sequence("10 1\n# x\n0 # y 1\n").unwrap(), vec![true, false, true, false]);
        assert!(parse_sequence("102").is_err());
        assert_eq!(parse_cut("1,00").unwrap().len(), 2);
        assert!(parse_cut("1,11").is_err());
    }
}
