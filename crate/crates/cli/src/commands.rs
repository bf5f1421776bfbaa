//! Argument definitions and subcommand drivers.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use mprod_core::linmap::jl_dimension;
use mprod_core::psvd::pseudo_svd_truncated;
use mprod_core::{CompressionReport, Tensor3};

use crate::bench::{run_bench, BenchAlgo, BenchConfig, BenchReport};
use crate::cube::load_cube;
use crate::error::{CliError, Result};
use crate::maps::{resolve_seed, MapChoice, SEED_ENV};
use crate::ppm::write_ppm;
use crate::verify::{run_checks, Fixtures, DEFAULT_REFERENCE_TOL};

#[derive(Debug, Parser)]
#[command(name = "mprod", version, about = "Tensor products with full-rank maps and cube compression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncated pseudo-SVD sweep over ranks and channel prefixes, written as CSV
    Compress(CompressArgs),
    /// False-colour PPM of three channels of a rank-k reconstruction
    Snapshot(SnapshotArgs),
    /// Check the built-in worked examples and report each result
    Verify(VerifyArgs),
    /// Time naive and Strassen face-wise products and fit scaling slopes
    Bench(BenchArgs),
    /// Print cube dimensions and summary statistics
    Info(InfoArgs),
}

#[derive(Debug, Args)]
pub struct CubeArgs {
    /// TCUBE1 input cube
    #[arg(long)]
    pub input: PathBuf,
    /// Scale the cube to unit Frobenius norm after loading
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// jl, identity, u3 or file:PATH (a TCUBE1 matrix with p = 1)
    #[arg(long, default_value = "jl")]
    pub map: MapChoice,
    /// Seed for the jl map; falls back to the MPROD_SEED environment variable, then 0
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    #[command(flatten)]
    pub cube: CubeArgs,
    #[command(flatten)]
    pub map: MapArgs,
    /// Truncation ranks, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
    /// Channel prefixes for the error, comma separated (default: all channels)
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<usize>,
    /// Output CSV (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SnapshotArgs {
    #[command(flatten)]
    pub cube: CubeArgs,
    #[command(flatten)]
    pub map: MapArgs,
    /// Truncation rank
    #[arg(long)]
    pub k: usize,
    /// Red, green and blue channels (1-based)
    #[arg(long, value_delimiter = ',', default_value = "26,16,8")]
    pub channels: Vec<usize>,
    /// Output PPM file
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Tolerance for reference values quoted to four decimals
    #[arg(long, default_value_t = DEFAULT_REFERENCE_TOL)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Matrix sizes (powers of two), comma separated
    #[arg(long, value_delimiter = ',', default_value = "128,256,512,1024")]
    pub sizes: Vec<usize>,
    /// Number of frontal slices q
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    /// Algorithms to time, comma separated
    #[arg(long, value_delimiter = ',', default_value = "naive,strassen")]
    pub algo: Vec<BenchAlgo>,
    /// Timed repetitions per size; the median is reported
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    /// Strassen switches to the naive kernel at or below this size
    #[arg(long, default_value_t = mprod_core::matkernels::DEFAULT_CROSSOVER)]
    pub crossover: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[command(flatten)]
    pub cube: CubeArgs,
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Compress(a) => compress(&a).map(|_| 0),
        Command::Snapshot(a) => snapshot(&a).map(|_| 0),
        Command::Verify(a) => verify(&a, &mut std::io::stdout().lock()),
        Command::Bench(a) => bench(&a).map(|_| 0),
        Command::Info(a) => info(&a, &mut std::io::stdout().lock()).map(|_| 0),
    }
}

fn csv_sink(out: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

pub fn write_report_csv(report: &CompressionReport, out: Option<&Path>) -> Result<()> {
    let mut w = csv_sink(out)?;
    w.write_record(["k", "s", "re", "cr", "seconds", "map", "seed"])?;
    let seed = report.seed.map(|s| s.to_string()).unwrap_or_default();
    for row in &report.rows {
        w.write_record([
            row.k.to_string(),
            row.s.to_string(),
            row.re.to_string(),
            row.cr.to_string(),
            row.seconds.to_string(),
            report.map.clone(),
            seed.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn compress(a: &CompressArgs) -> Result<CompressionReport> {
    let cube = load_cube(&a.cube.input, a.cube.normalize)?;
    let seed = resolve_seed(a.map.seed)?;
    let map = a.map.map.build(&cube, seed)?;
    eprintln!(
        "map {}: {} x {} ({})",
        a.map.map,
        map.q(),
        map.p(),
        map.kind().name()
    );
    let ss = if a.s.is_empty() { vec![cube.p()] } else { a.s.clone() };
    let seed_col = (a.map.map == MapChoice::Jl).then_some(seed);
    let report = CompressionReport::sweep(&cube, &map, &a.k, &ss, &a.map.map.to_string(), seed_col)?;
    write_report_csv(&report, a.out.as_deref())?;
    Ok(report)
}

fn parse_channels(c: &[usize]) -> Result<[usize; 3]> {
    c.try_into()
        .map_err(|_| CliError::BadFlag(format!("expected three channels, got {}", c.len())))
}

pub fn snapshot(a: &SnapshotArgs) -> Result<()> {
    let channels = parse_channels(&a.channels)?;
    let cube = load_cube(&a.cube.input, a.cube.normalize)?;
    if let Some(&c) = channels.iter().find(|&&c| c == 0 || c > cube.p()) {
        return Err(CliError::BadChannel { channel: c, p: cube.p() });
    }
    let seed = resolve_seed(a.map.seed)?;
    let map = a.map.map.build(&cube, seed)?;
    let rec = pseudo_svd_truncated(&cube, &map, a.k)?;
    write_ppm(&a.out, &rec, channels)
}

/// Prints the report and returns 0 when every check passed, 1 otherwise.
pub fn verify(a: &VerifyArgs, out: &mut impl Write) -> Result<i32> {
    if !(a.tolerance > 0.0) {
        return Err(CliError::BadFlag(format!("tolerance must be positive, got {}", a.tolerance)));
    }
    let checks = run_checks(&Fixtures::default(), a.tolerance);
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(out, "{} checks, {} failed", checks.len(), failed)?;
    Ok(i32::from(failed > 0))
}

pub fn bench_config(a: &BenchArgs) -> Result<BenchConfig> {
    Ok(BenchConfig {
        algos: a.algo.clone(),
        sizes: a.sizes.clone(),
        depth: a.depth,
        repeats: a.repeats,
        crossover: a.crossover,
        seed: resolve_seed(a.seed)?,
    })
}

pub fn write_bench_csv(report: &BenchReport, out: Option<&Path>) -> Result<()> {
    let mut w = csv_sink(out)?;
    w.write_record(["algo", "size", "depth", "median_seconds", "repeats"])?;
    for row in &report.rows {
        w.write_record([
            row.algo.to_string(),
            row.size.to_string(),
            row.depth.to_string(),
            row.median_seconds.to_string(),
            row.repeats.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn bench(a: &BenchArgs) -> Result<BenchReport> {
    let report = run_bench(&bench_config(a)?)?;
    write_bench_csv(&report, a.out.as_deref())?;
    for (algo, slope) in &report.slopes {
        eprintln!("{algo}: log-log slope {slope:.3}");
    }
    if let Some(d) = report.max_abs_diff {
        eprintln!("max |naive - strassen| = {d:.3e}");
        if d > 1e-8 {
            return Err(CliError::KernelMismatch(d));
        }
    }
    Ok(report)
}

pub fn cube_summary(t: &Tensor3) -> String {
    let (m, n, p) = t.dims();
    let (lo, hi) = t
        .as_slice()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    format!(
        "dimensions {m} x {n} x {p}\nentries {}\nfrobenius norm {}\nmin {lo}\nmax {hi}\njl map rows {}\n",
        m * n * p,
        t.frobenius_norm(),
        jl_dimension(p)
    )
}

pub fn info(a: &InfoArgs, out: &mut impl Write) -> Result<()> {
    let cube = load_cube(&a.cube.input, a.cube.normalize)?;
    write!(out, "{}", cube_summary(&cube))?;
    if let Ok(v) = std::env::var(SEED_ENV) {
        writeln!(out, "{SEED_ENV}={v}")?;
    }
    Ok(())
}
