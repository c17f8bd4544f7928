//! Desk-scale benchmark harness.
//!
//! For every dimension `d`, size `n` and method, `trials` standard Gaussian
//! datasets are generated and the depth of `(I_d, 0_d)` is timed. The dataset
//! of trial `t` in cell `(d, n)` comes from a ChaCha8 stream selected by
//! `(d, n, t)`, so all methods of a cell see the same data and depth columns
//! do not depend on which other cells or methods are requested.
//!
//! A cell is censored when its mean time exceeds the budget; exact cells are
//! stopped early through a deadline of `budget × trials`. Once a cell is
//! censored, larger sizes of the same method and dimension are skipped.
//!
//! Approximate methods are compared with the exact depth of the same data,
//! taken from the timed exact cell when present and otherwise computed
//! untimed under the same deadline.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use scatter_depth::{DepthError, StandardizedSample, DEFAULT_EPS};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::run::{compute, Method};

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub dims: Vec<usize>,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub time_budget_s: f64,
    pub seed: u64,
    /// Sample count for the approximate methods.
    pub samples: usize,
    pub eps: f64,
    /// Run the trials of a cell concurrently; timings are then contended.
    pub parallel_trials: bool,
}

impl BenchSpec {
    pub fn new(dims: Vec<usize>, sizes: Vec<usize>, trials: usize, methods: Vec<Method>) -> Self {
        BenchSpec {
            dims,
            sizes,
            trials,
            methods,
            time_budget_s: 60.0,
            seed: 0,
            samples: 10_000,
            eps: DEFAULT_EPS,
            parallel_trials: false,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let fail = |m: &str| Err(CliError::Validation(m.to_string()));
        if self.dims.is_empty() || self.sizes.is_empty() || self.methods.is_empty() {
            return fail("dims, sizes and methods must be non-empty");
        }
        if self.dims.iter().any(|&d| d < 2) {
            return fail("dimensions must be at least 2");
        }
        if self.sizes.contains(&0) {
            return fail("sizes must be positive");
        }
        if self.trials == 0 {
            return fail("trials must be at least 1");
        }
        if self.samples == 0 {
            return fail("N must be at least 1");
        }
        if self.time_budget_s.is_nan() || self.time_budget_s <= 0.0 {
            return fail("budget must be positive");
        }
        if self.methods.contains(&Method::Oracle) {
            return fail("the oracle is a test reference and is not benchmarked");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Done,
    Censored,
    /// The method does not apply to this dimension.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchCell {
    pub d: usize,
    pub n: usize,
    pub method: Method,
    pub status: CellStatus,
    pub trials: usize,
    pub mean_time_s: Option<f64>,
    pub sd_time_s: Option<f64>,
    pub mean_depth: Option<f64>,
    /// Mean of `(approx − exact) / exact` over trials with positive exact depth.
    pub mean_rel_diff: Option<f64>,
    pub match_fraction: Option<f64>,
    pub zero_exact_skipped: usize,
    pub exact_unavailable: usize,
    pub contended: bool,
    #[serde(skip)]
    pub depths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable {
    pub cells: Vec<BenchCell>,
}

/// Data for trial `trial` of cell `(d, n)`, plus a seed for the approximations.
pub fn trial_dataset(seed: u64, d: usize, n: usize, trial: usize) -> (Vec<Vec<f64>>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((d as u64) << 56) ^ ((n as u64) << 24) ^ trial as u64);
    let x = (0..n).map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect()).collect();
    (x, rng.random())
}

struct Trial {
    sample: StandardizedSample,
    approx_seed: u64,
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

fn applies(method: Method, d: usize) -> bool {
    method != Method::Exact2d || d == 2
}

/// Runs `method` on every trial; `None` when the deadline passes.
fn run_trials(
    trials: &[Trial],
    method: Method,
    spec: &BenchSpec,
    deadline: Instant,
) -> CliResult<Option<Vec<(usize, f64)>>> {
    let one = |t: &Trial| -> CliResult<Option<(usize, f64)>> {
        let start = Instant::now();
        let dl = method.is_exact().then_some(deadline);
        match compute(&t.sample, method, Some(spec.samples), Some(t.approx_seed), spec.eps, 1, dl) {
            Ok(r) => Ok(Some((r.depth, start.elapsed().as_secs_f64()))),
            Err(CliError::Depth(DepthError::DeadlineExceeded)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let results: Vec<CliResult<Option<(usize, f64)>>> = if spec.parallel_trials {
        trials.par_iter().map(one).collect()
    } else {
        let mut out = Vec::with_capacity(trials.len());
        for t in trials {
            let r = one(t);
            let stop = matches!(r, Ok(None));
            out.push(r);
            if stop {
                break;
            }
        }
        out
    };
    let mut done = Vec::with_capacity(trials.len());
    for r in results {
        match r? {
            Some(v) => done.push(v),
            None => return Ok(None),
        }
    }
    Ok(Some(done))
}

fn censored(d: usize, n: usize, method: Method, status: CellStatus, spec: &BenchSpec) -> BenchCell {
    BenchCell {
        d,
        n,
        method,
        status,
        trials: spec.trials,
        mean_time_s: None,
        sd_time_s: None,
        mean_depth: None,
        mean_rel_diff: None,
        match_fraction: None,
        zero_exact_skipped: 0,
        exact_unavailable: 0,
        contended: spec.parallel_trials,
        depths: Vec::new(),
    }
}

pub fn bench(spec: &BenchSpec) -> CliResult<BenchTable> {
    bench_with_progress(spec, |_| {})
}

/// As [`bench`], calling `progress` after each finished cell.
pub fn bench_with_progress(spec: &BenchSpec, mut progress: impl FnMut(&BenchCell)) -> CliResult<BenchTable> {
    spec.validate()?;
    let mut sizes = spec.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let budget = Duration::from_secs_f64(spec.time_budget_s);
    let mut cells = Vec::new();

    for &d in &spec.dims {
        let mut gave_up: Vec<Method> = Vec::new();
        let mut exact_gave_up = false;
        for &n in &sizes {
            let trials: Vec<Trial> = (0..spec.trials)
                .map(|t| {
                    let (x, approx_seed) = trial_dataset(spec.seed, d, n, t);
                    Ok(Trial { sample: StandardizedSample::from_points(&x)?, approx_seed })
                })
                .collect::<CliResult<_>>()?;
            let cell_deadline = || Instant::now() + budget * spec.trials as u32;

            let mut reference: Option<Vec<usize>> = None;
            let mut row = Vec::new();
            for &method in &spec.methods {
                if !applies(method, d) {
                    row.push(censored(d, n, method, CellStatus::Skipped, spec));
                    continue;
                }
                if gave_up.contains(&method) {
                    row.push(censored(d, n, method, CellStatus::Censored, spec));
                    continue;
                }
                let outcome = run_trials(&trials, method, spec, cell_deadline())?;
                let Some(results) = outcome else {
                    gave_up.push(method);
                    row.push(censored(d, n, method, CellStatus::Censored, spec));
                    continue;
                };
                let times: Vec<f64> = results.iter().map(|r| r.1).collect();
                let (mean, sd) = mean_sd(&times);
                if mean > spec.time_budget_s {
                    gave_up.push(method);
                    row.push(censored(d, n, method, CellStatus::Censored, spec));
                    continue;
                }
                let depths: Vec<usize> = results.iter().map(|r| r.0).collect();
                if method.is_exact() && reference.is_none() {
                    reference = Some(depths.clone());
                }
                let mean_depth = depths.iter().sum::<usize>() as f64 / depths.len() as f64;
                let mut cell = censored(d, n, method, CellStatus::Done, spec);
                cell.mean_time_s = Some(mean);
                cell.sd_time_s = Some(sd);
                cell.mean_depth = Some(mean_depth);
                cell.depths = depths;
                row.push(cell);
            }

            let needs_reference = row.iter().any(|c| c.method.is_approx() && c.status == CellStatus::Done);
            if needs_reference && reference.is_none() && !exact_gave_up {
                let method = if d == 2 { Method::Exact2d } else { Method::Exact };
                match run_trials(&trials, method, spec, cell_deadline())? {
                    Some(r) => reference = Some(r.into_iter().map(|(depth, _)| depth).collect()),
                    None => exact_gave_up = true,
                }
            }
            for cell in row.iter_mut().filter(|c| c.method.is_approx() && c.status == CellStatus::Done) {
                let Some(exact) = &reference else {
                    cell.exact_unavailable = cell.depths.len();
                    continue;
                };
                let mut rel = Vec::new();
                let mut matches = 0;
                for (&a, &e) in cell.depths.iter().zip(exact) {
                    matches += usize::from(a == e);
                    if e == 0 {
                        cell.zero_exact_skipped += 1;
                    } else {
                        rel.push((a as f64 - e as f64) / e as f64);
                    }
                }
                cell.match_fraction = Some(matches as f64 / cell.depths.len() as f64);
                cell.mean_rel_diff = (!rel.is_empty()).then(|| rel.iter().sum::<f64>() / rel.len() as f64);
            }
            for cell in row {
                progress(&cell);
                cells.push(cell);
            }
        }
    }
    Ok(BenchTable { cells })
}

pub const CENSORED_MARK: &str = "\u{2014}";

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

impl BenchTable {
    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let out = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record([
            "d",
            "n",
            "method",
            "status",
            "trials",
            "mean_time_s",
            "sd_time_s",
            "mean_depth",
            "mean_rel_diff",
            "match_fraction",
            "zero_exact_skipped",
            "exact_unavailable",
            "contended",
        ])
        .map_err(out)?;
        for c in &self.cells {
            let status = match c.status {
                CellStatus::Done => "done",
                CellStatus::Censored => "censored",
                CellStatus::Skipped => "skipped",
            };
            w.write_record([
                c.d.to_string(),
                c.n.to_string(),
                c.method.to_string(),
                status.to_string(),
                c.trials.to_string(),
                opt(c.mean_time_s),
                opt(c.sd_time_s),
                opt(c.mean_depth),
                opt(c.mean_rel_diff),
                opt(c.match_fraction),
                c.zero_exact_skipped.to_string(),
                c.exact_unavailable.to_string(),
                c.contended.to_string(),
            ])
            .map_err(out)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }

    /// Aligned text table. Time is shown as `mean (sd)` and accuracy as
    /// `reldiff (match)`; censored cells show [`CENSORED_MARK`].
    pub fn to_text(&self) -> String {
        let header = ["d", "n", "method", "time s (sd)", "rel. diff (match)", "mean depth"];
        let mut rows: Vec<[String; 6]> = Vec::new();
        for c in &self.cells {
            let (time, acc, depth) = match c.status {
                CellStatus::Done => {
                    let time = format!("{:.5} ({:.5})", c.mean_time_s.unwrap_or(0.0), c.sd_time_s.unwrap_or(0.0));
                    let acc = match (c.mean_rel_diff, c.match_fraction) {
                        (Some(r), Some(m)) => format!("{r:.5} ({m:.2})"),
                        (None, Some(m)) => format!("n/a ({m:.2})"),
                        _ if c.method.is_approx() => "n/a".to_string(),
                        _ => String::new(),
                    };
                    (time, acc, c.mean_depth.map(|x| format!("{x:.2}")).unwrap_or_default())
                }
                CellStatus::Censored => {
                    let acc = if c.method.is_approx() { CENSORED_MARK } else { "" };
                    (CENSORED_MARK.to_string(), acc.to_string(), String::new())
                }
                CellStatus::Skipped => ("n/a".to_string(), String::new(), String::new()),
            };
            rows.push([c.d.to_string(), c.n.to_string(), c.method.to_string(), time, acc, depth]);
        }
        let mut widths = header.map(|h| h.chars().count());
        for r in &rows {
            for (w, s) in widths.iter_mut().zip(r) {
                *w = (*w).max(s.chars().count());
            }
        }
        let mut out = String::new();
        let mut line = |cols: &[&str]| {
            let mut s = String::new();
            for (i, (col, w)) in cols.iter().zip(widths).enumerate() {
                let pad = w - col.chars().count();
                if i > 0 {
                    s.push_str("  ");
                }
                if i < 3 {
                    s.push_str(col);
                    s.push_str(&" ".repeat(pad));
                } else {
                    s.push_str(&" ".repeat(pad));
                    s.push_str(col);
                }
            }
            writeln!(out, "{}", s.trim_end()).expect("writing to a String");
        };
        line(&header);
        for r in &rows {
            line(&r.iter().map(String::as_str).collect::<Vec<_>>());
        }
        let skipped: usize = self.cells.iter().map(|c| c.zero_exact_skipped).sum();
        if skipped > 0 {
            writeln!(out, "\n{skipped} trial(s) with exact depth 0 excluded from relative differences")
                .expect("writing to a String");
        }
        if self.cells.iter().any(|c| c.contended) {
            writeln!(out, "timings measured with concurrent trials (contended)").expect("writing to a String");
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_csv()?).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
    }
}
