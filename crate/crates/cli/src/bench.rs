//! Timing of face-wise products with the naive and Strassen kernels.

use std::time::Instant;

use mprod_core::rng::SeededRng;
use mprod_core::{facewise, MulAlgo, Tensor3};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchAlgo {
    Naive,
    Strassen,
}

impl BenchAlgo {
    pub fn name(self) -> &'static str {
        match self {
            BenchAlgo::Naive => "naive",
            BenchAlgo::Strassen => "strassen",
        }
    }
}

impl std::str::FromStr for BenchAlgo {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(BenchAlgo::Naive),
            "strassen" => Ok(BenchAlgo::Strassen),
            _ => Err(CliError::BadFlag(format!("unknown algorithm {s:?}; expected naive or strassen"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub algos: Vec<BenchAlgo>,
    pub sizes: Vec<usize>,
    pub depth: usize,
    pub repeats: usize,
    pub crossover: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub algo: &'static str,
    pub size: usize,
    pub depth: usize,
    pub median_seconds: f64,
    pub repeats: usize,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Fitted log-log slope per algorithm, in the order requested.
    pub slopes: Vec<(&'static str, f64)>,
    /// Largest entry difference between the kernels over all sizes, when both ran.
    pub max_abs_diff: Option<f64>,
}

impl BenchReport {
    pub fn slope(&self, algo: BenchAlgo) -> Option<f64> {
        self.slopes.iter().find(|(a, _)| *a == algo.name()).map(|&(_, s)| s)
    }
}

pub fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn time_median(repeats: usize, mut f: impl FnMut() -> Result<Tensor3>) -> Result<(f64, Tensor3)> {
    let mut times = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats {
        let start = Instant::now();
        let out = f()?;
        times.push(start.elapsed().as_secs_f64());
        last = Some(out);
    }
    Ok((median(&mut times), last.expect("at least one repeat")))
}

pub fn validate(cfg: &BenchConfig) -> Result<()> {
    if cfg.algos.is_empty() {
        return Err(CliError::BadFlag("no algorithm selected".into()));
    }
    if cfg.sizes.len() < 2 {
        return Err(CliError::BadFlag("need at least two sizes to fit a slope".into()));
    }
    if let Some(&s) = cfg.sizes.iter().find(|s| !s.is_power_of_two()) {
        return Err(CliError::BadFlag(format!("size {s} is not a power of two")));
    }
    if cfg.repeats < 5 {
        return Err(CliError::BadFlag(format!("repeats must be at least 5, got {}", cfg.repeats)));
    }
    if cfg.depth == 0 || cfg.crossover == 0 {
        return Err(CliError::BadFlag("depth and crossover must be positive".into()));
    }
    Ok(())
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    validate(cfg)?;
    let mut algos: Vec<BenchAlgo> = Vec::new();
    for &a in &cfg.algos {
        if !algos.contains(&a) {
            algos.push(a);
        }
    }
    let mut rng = SeededRng::new(cfg.seed);
    let mut rows = Vec::new();
    let mut times: Vec<Vec<f64>> = vec![Vec::new(); algos.len()];
    let mut max_abs_diff: Option<f64> = None;
    for &n in &cfg.sizes {
        let a = Tensor3::from_fn(n, n, cfg.depth, |_, _, _| 2.0 * rng.unit() - 1.0);
        let b = Tensor3::from_fn(n, n, cfg.depth, |_, _, _| 2.0 * rng.unit() - 1.0);
        let mut first: Option<Tensor3> = None;
        for (slot, &algo) in algos.iter().enumerate() {
            let kernel = match algo {
                BenchAlgo::Naive => MulAlgo::Naive,
                BenchAlgo::Strassen => MulAlgo::Strassen {
                    crossover: cfg.crossover,
                },
            };
            let (t, c) = time_median(cfg.repeats, || Ok(facewise(&a, &b, kernel)?))?;
            times[slot].push(t);
            rows.push(BenchRow {
                algo: algo.name(),
                size: n,
                depth: cfg.depth,
                median_seconds: t,
                repeats: cfg.repeats,
            });
            match &first {
                None => first = Some(c),
                Some(reference) => {
                    let diff = reference
                        .as_slice()
                        .iter()
                        .zip(c.as_slice())
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0, f64::max);
                    max_abs_diff = Some(max_abs_diff.unwrap_or(0.0).max(diff));
                }
            }
        }
    }
    let xs: Vec<f64> = cfg.sizes.iter().map(|&n| n as f64).collect();
    let slopes = algos
        .iter()
        .zip(&times)
        .map(|(algo, t)| (algo.name(), loglog_slope(&xs, t)))
        .collect();
    Ok(BenchReport {
        rows,
        slopes,
        max_abs_diff,
    })
}
