//! The `spectrum` pipeline: build, solve, sample the limit measure, compare, write.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use twistspec_core::limits::{default_window, frozen_mixture, DEFAULT_WINDOW_PADDING};
use twistspec_core::linalg::eigenvalues_with;
use twistspec_core::rng::RNG_ALGORITHM;
use twistspec_core::symbol::sample_intervals;
use twistspec_core::{
    build_perturbed, build_randomized, build_twisted, hausdorff, mu_sample, sliced_w1, BandedMatrix, EigenOptions,
    EmpiricalMeasure, LaurentSymbol, PointCloud, Spectrum, Window,
};

use crate::config::{Entries, ExperimentConfig, Mode};
use crate::error::CliResult;
use crate::io;
use crate::svg::{self, Layer, Panel};

/// Grid of the plotted symbol range: `x` intervals and points on the unit circle.
pub const RANGE_GRID: (usize, usize) = (64, 128);
/// Grid of the plotted support of a tridiagonal limit measure.
const SUPPORT_GRID: (usize, usize) = (100, 50);

pub fn build_matrix(sym: &LaurentSymbol, cfg: &ExperimentConfig, n: usize, mode: Mode) -> CliResult<BandedMatrix> {
    Ok(match mode {
        Mode::Deterministic => build_twisted(sym, n)?,
        Mode::Perturbed => build_perturbed(sym, n, cfg.sigma.resolve(n), &cfg.noise, cfg.seed)?,
        Mode::Randomized => build_randomized(sym, n, cfg.seed)?,
    })
}

/// A solved matrix with its timings.
#[derive(Debug, Clone)]
pub struct MatrixRun {
    pub n: usize,
    pub mode: Mode,
    pub spectrum: Spectrum,
    pub build_seconds: f64,
    pub solve_seconds: f64,
}

pub fn solve(sym: &LaurentSymbol, cfg: &ExperimentConfig, n: usize, mode: Mode) -> CliResult<MatrixRun> {
    let t0 = Instant::now();
    let m = build_matrix(sym, cfg, n, mode)?;
    let build_seconds = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let spectrum = eigenvalues_with(&m, EigenOptions { balance: cfg.balance });
    Ok(MatrixRun { n, mode, spectrum, build_seconds, solve_seconds: t1.elapsed().as_secs_f64() })
}

/// Draws from the limit measure and a dense sample of its support.
#[derive(Debug, Clone)]
pub struct LimitData {
    /// `arcsine-mixture` for tridiagonal symbols, `frozen-mixture` otherwise.
    pub kind: &'static str,
    pub samples: PointCloud,
    pub support: PointCloud,
    pub seconds: f64,
}

pub fn limit_data(sym: &LaurentSymbol, cfg: &ExperimentConfig) -> CliResult<LimitData> {
    let t0 = Instant::now();
    let (kind, samples, support) = match sym.as_tridiagonal() {
        Some(tri) => {
            let samples = mu_sample(&tri, cfg.limit.samples, cfg.seed)?;
            let support = sample_intervals(&tri.xi_support(SUPPORT_GRID.0)?, SUPPORT_GRID.1);
            ("arcsine-mixture", samples, support)
        }
        None => {
            let samples = frozen_mixture(sym, cfg.limit.slices, cfg.limit.section)?;
            ("frozen-mixture", samples.clone(), samples)
        }
    };
    Ok(LimitData { kind, samples, support, seconds: t0.elapsed().as_secs_f64() })
}

pub fn symbol_range(sym: &LaurentSymbol) -> CliResult<PointCloud> {
    Ok(sym.range(RANGE_GRID.0, RANGE_GRID.1)?)
}

pub fn plot_window(sym: &LaurentSymbol) -> CliResult<Window> {
    Ok(default_window(sym, DEFAULT_WINDOW_PADDING)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct Runtimes {
    pub build: f64,
    pub eigensolve: f64,
    pub limit: f64,
    pub distances: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMetrics {
    pub n: usize,
    pub mode: String,
    pub seed: u64,
    pub rng_algorithm: String,
    pub sigma: f64,
    pub converged: bool,
    pub unconverged: usize,
    pub qr_sweeps: usize,
    pub limit_kind: String,
    pub limit_samples: usize,
    pub angles: usize,
    pub sliced_w1: f64,
    pub hausdorff_to_support: f64,
    pub runtimes: Runtimes,
    pub config: Entries,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub dir: PathBuf,
    pub metrics: RunMetrics,
}

/// Output directory of the run of size `n`: the configured directory itself for a single size,
/// one subdirectory per size otherwise.
pub fn run_dir(cfg: &ExperimentConfig, n: usize) -> PathBuf {
    if cfg.n.len() == 1 {
        cfg.out.clone()
    } else {
        cfg.out.join(format!("n-{n}"))
    }
}

fn run_one(
    cfg: &ExperimentConfig,
    sym: &LaurentSymbol,
    limit: &LimitData,
    range: &PointCloud,
    n: usize,
) -> CliResult<RunReport> {
    let t0 = Instant::now();
    let dir = run_dir(cfg, n);
    io::ensure_dir(&dir)?;
    let run = solve(sym, cfg, n, cfg.mode)?;

    let t1 = Instant::now();
    let values = PointCloud::new(run.spectrum.values.clone());
    let measure = EmpiricalMeasure::new(values.clone())?;
    let limit_measure = EmpiricalMeasure::new(limit.samples.clone())?;
    let w1 = sliced_w1(&measure, &limit_measure, cfg.angles)?;
    let h = hausdorff(&values, &limit.support)?;
    let distances = t1.elapsed().as_secs_f64();

    let mut echo = cfg.clone();
    echo.n = vec![n];
    echo.out = dir.clone();

    io::write_points(&dir.join("eigenvalues.csv"), &run.spectrum.values)?;
    io::write_points(&dir.join("limit_samples.csv"), &limit.samples.points)?;
    io::write_text(&dir.join("config.txt"), &echo.to_text())?;
    let panel = Panel::fitted(
        &format!("{} n = {n}", cfg.mode),
        plot_window(sym)?,
        vec![
            Layer::new("symbol range", svg::BLUE, 0.8, range.points.clone()),
            Layer::new("limit support", svg::BLACK, 0.8, limit.support.points.clone()),
            Layer::new("eigenvalues", svg::RED, 1.6, run.spectrum.values.clone()),
        ],
    );
    io::write_text(&dir.join("scatter.svg"), &svg::render(&[panel]))?;

    let metrics = RunMetrics {
        n,
        mode: cfg.mode.to_string(),
        seed: cfg.seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        sigma: match cfg.mode {
            Mode::Perturbed => cfg.sigma.resolve(n),
            Mode::Deterministic | Mode::Randomized => 0.0,
        },
        converged: run.spectrum.all_converged(),
        unconverged: run.spectrum.unconverged(),
        qr_sweeps: run.spectrum.iterations,
        limit_kind: limit.kind.to_string(),
        limit_samples: limit.samples.len(),
        angles: cfg.angles,
        sliced_w1: w1,
        hausdorff_to_support: h,
        runtimes: Runtimes {
            build: run.build_seconds,
            eigensolve: run.solve_seconds,
            limit: limit.seconds,
            distances,
            total: t0.elapsed().as_secs_f64() + limit.seconds,
        },
        config: echo.to_entries(),
    };
    io::write_json(&dir.join("metrics.json"), &metrics)?;
    Ok(RunReport { dir, metrics })
}

/// Runs every configured size concurrently, each into its own directory.
pub fn run_experiment(cfg: &ExperimentConfig) -> CliResult<Vec<RunReport>> {
    let sym = cfg.symbol()?;
    let limit = limit_data(&sym, cfg)?;
    let range = symbol_range(&sym)?;
    cfg.n.par_iter().map(|&n| run_one(cfg, &sym, &limit, &range, n)).collect()
}

/// Sizes whose spectra did not fully converge.
pub fn unconverged(reports: &[RunReport]) -> Vec<(usize, &Path)> {
    reports.iter().filter(|r| !r.metrics.converged).map(|r| (r.metrics.n, r.dir.as_path())).collect()
}
