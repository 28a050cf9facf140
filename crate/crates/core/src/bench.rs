//! Benchmark harness: index statistics and timings per game configuration.

use std::io;
use std::time::Instant;

use thiserror::Error;

use crate::arena::ParityGame;
use crate::generators::{gen_family, gen_random, parse_params, Family, GenError, RandomConfig};
use crate::reduce::{rabin, static_compress, OracleMode};
use crate::solver::zielonka_solve;

/// Fixed CSV header.
pub const CSV_HEADER: [&str; 16] = [
    "game",
    "mu",
    "mu_s",
    "ri_alpha",
    "static_ms",
    "alpha_ms",
    "iterations",
    "solve_ms",
    "solve_static_ms",
    "solve_alpha_ms",
    "runs",
    "static_ms_sd",
    "alpha_ms_sd",
    "solve_ms_sd",
    "solve_alpha_ms_sd",
    "error",
];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("line {line}: {message}")]
    Spec { line: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// What a benchmark line generates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameSource {
    Family(Family, Vec<u64>),
    /// A fresh game per run, seeded `seed + run`.
    Random(RandomConfig),
}

impl GameSource {
    pub fn label(&self) -> String {
        match self {
            GameSource::Family(f, p) => {
                let p: Vec<String> = p.iter().map(u64::to_string).collect();
                format!("{f}[{}]", p.join(" "))
            }
            GameSource::Random(c) => format!("random[{c}]"),
        }
    }

    fn game(&self, run: usize) -> Result<ParityGame, GenError> {
        match self {
            GameSource::Family(f, p) => gen_family(*f, p),
            GameSource::Random(c) => gen_random(&c.with_seed(c.seed.wrapping_add(run as u64))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchSpec {
    pub source: GameSource,
    pub runs: Option<usize>,
}

/// Parses a line-oriented spec: `family params [runs]` per line, where
/// params is `a,b` or `[a b]` for families and `xx/yy/zz/cc` for `random`.
/// Blank lines and `#` comments are skipped.
pub fn parse_spec(text: &str) -> Result<Vec<BenchSpec>, BenchError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| BenchError::Spec { line: i + 1, message };
        let (name, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let (name, rest) = match name.split_once('[') {
            Some((n, p)) => (n, format!("[{p} {rest}")),
            None => (name, rest.to_string()),
        };
        let (params, runs) = match rest.rfind(']') {
            Some(close) => (rest[..=close].to_string(), rest[close + 1..].trim().to_string()),
            None => {
                let mut toks = rest.split_whitespace();
                let p = toks.next().unwrap_or("").to_string();
                (p, toks.collect::<Vec<_>>().join(" "))
            }
        };
        let runs = if runs.is_empty() {
            None
        } else {
            Some(runs.parse::<usize>().map_err(|_| err(format!("bad run count `{runs}`")))?)
        };
        let source = if name.eq_ignore_ascii_case("random") {
            let cfg: RandomConfig = params
                .trim_matches(|c| c == '[' || c == ']' || c == ' ')
                .parse()
                .map_err(|e: GenError| err(e.to_string()))?;
            GameSource::Random(cfg)
        } else {
            let family: Family = name.parse().map_err(|e: GenError| err(e.to_string()))?;
            let p = parse_params(&params).map_err(|e| err(e.to_string()))?;
            GameSource::Family(family, p)
        };
        out.push(BenchSpec { source, runs });
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub stddev: f64,
}

impl Stat {
    pub fn of(xs: &[f64]) -> Stat {
        if xs.is_empty() {
            return Stat::default();
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Stat { mean, stddev: var.sqrt() }
    }
}

/// One row of the results table. Index columns are means over runs
/// (constant for deterministic families).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchRow {
    pub game: String,
    pub mu: f64,
    pub mu_static: f64,
    pub ri_alpha: f64,
    pub static_ms: Stat,
    pub alpha_ms: Stat,
    pub iterations: f64,
    pub solve_ms: Stat,
    pub solve_static_ms: Stat,
    pub solve_alpha_ms: Stat,
    pub runs: usize,
    pub error: Option<String>,
}

impl BenchRow {
    fn record(&self) -> Vec<String> {
        let f = |x: f64| format!("{x:.3}");
        let idx = |x: f64| {
            if x.fract() == 0.0 {
                format!("{x}")
            } else {
                format!("{x:.2}")
            }
        };
        vec![
            self.game.clone(),
            idx(self.mu),
            idx(self.mu_static),
            idx(self.ri_alpha),
            f(self.static_ms.mean),
            f(self.alpha_ms.mean),
            idx(self.iterations),
            f(self.solve_ms.mean),
            f(self.solve_static_ms.mean),
            f(self.solve_alpha_ms.mean),
            self.runs.to_string(),
            f(self.static_ms.stddev),
            f(self.alpha_ms.stddev),
            f(self.solve_ms.stddev),
            f(self.solve_alpha_ms.stddev),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs one configuration `runs` times.
pub fn bench_one(source: &GameSource, runs: usize) -> BenchRow {
    let mut row = BenchRow {
        game: source.label(),
        runs,
        ..BenchRow::default()
    };
    let runs = runs.max(1);
    let mut idx = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    let mut times = [Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for run in 0..runs {
        let game = match source.game(run) {
            Ok(g) => g,
            Err(e) => {
                row.error = Some(e.to_string());
                return row;
            }
        };
        let t = Instant::now();
        let compressed = static_compress(game.coloring());
        times[0].push(ms(t));

        let t = Instant::now();
        let reduced = match rabin(game.arena(), game.coloring(), OracleMode::AbstractCycle) {
            Ok(r) => r,
            Err(e) => {
                row.error = Some(e.to_string());
                return row;
            }
        };
        times[1].push(ms(t));

        let t = Instant::now();
        zielonka_solve(&game);
        times[2].push(ms(t));
        let static_game = game.recolored(compressed.clone()).expect("same node count");
        let t = Instant::now();
        zielonka_solve(&static_game);
        times[3].push(ms(t));
        let alpha_game = game.recolored(reduced.coloring.clone()).expect("same node count");
        let t = Instant::now();
        zielonka_solve(&alpha_game);
        times[4].push(ms(t));

        idx[0].push(game.coloring().index() as f64);
        idx[1].push(compressed.index() as f64);
        idx[2].push(reduced.coloring.index() as f64);
        idx[3].push(reduced.report.iteration_count() as f64);
    }
    row.mu = Stat::of(&idx[0]).mean;
    row.mu_static = Stat::of(&idx[1]).mean;
    row.ri_alpha = Stat::of(&idx[2]).mean;
    row.iterations = Stat::of(&idx[3]).mean;
    row.static_ms = Stat::of(&times[0]);
    row.alpha_ms = Stat::of(&times[1]);
    row.solve_ms = Stat::of(&times[2]);
    row.solve_static_ms = Stat::of(&times[3]);
    row.solve_alpha_ms = Stat::of(&times[4]);
    row
}

/// One row per spec entry; entries without a run count use `default_runs`.
pub fn bench_run(spec: &[BenchSpec], default_runs: usize) -> Vec<BenchRow> {
    spec.iter()
        .map(|s| bench_one(&s.source, s.runs.unwrap_or(default_runs)))
        .collect()
}

pub fn write_csv<W: io::Write>(rows: &[BenchRow], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}
