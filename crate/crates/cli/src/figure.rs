//! Two-panel figure reproduction.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use twistspec_core::limits::frozen_esm;
use twistspec_core::rng::RNG_ALGORITHM;
use twistspec_core::{hausdorff, sliced_w1, Complex64, EmpiricalMeasure, PointCloud};

use crate::config::{Entries, ExperimentConfig, Mode, SymbolSpec};
use crate::error::{CliError, CliResult};
use crate::io;
use crate::run::{limit_data, plot_window, solve, symbol_range, MatrixRun};
use crate::svg::{self, Layer, Panel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig4,
    Fig5,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [FigureId::Fig1, FigureId::Fig2, FigureId::Fig4, FigureId::Fig5];

    pub fn tag(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        }
    }

    pub fn preset(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig4 => "ex4",
            FigureId::Fig5 => "ex5",
        }
    }

    /// `x` values of the frozen Toeplitz sections on the right panel of the banded figures.
    pub fn frozen_x(self) -> Vec<f64> {
        match self {
            FigureId::Fig1 | FigureId::Fig2 => Vec::new(),
            FigureId::Fig4 => (0..=4).map(|r| r as f64 / 4.0).collect(),
            FigureId::Fig5 => (0..=8).map(|r| r as f64 / 8.0).collect(),
        }
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| format!("unknown figure `{s}` (expected fig1, fig2, fig4 or fig5)"))
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PanelMetrics {
    pub mode: String,
    pub converged: bool,
    pub unconverged: usize,
    pub build_seconds: f64,
    pub eigensolve_seconds: f64,
}

impl From<&MatrixRun> for PanelMetrics {
    fn from(run: &MatrixRun) -> Self {
        PanelMetrics {
            mode: run.mode.to_string(),
            converged: run.spectrum.all_converged(),
            unconverged: run.spectrum.unconverged(),
            build_seconds: run.build_seconds,
            eigensolve_seconds: run.solve_seconds,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureMetrics {
    pub figure: String,
    pub n: usize,
    pub seed: u64,
    pub rng_algorithm: String,
    pub sigma: f64,
    pub deterministic: PanelMetrics,
    pub perturbed: PanelMetrics,
    /// Sliced W1 between the perturbed spectrum and the limit-measure sample.
    pub sliced_w1: f64,
    pub hausdorff_to_support: f64,
    pub frozen_x: Vec<f64>,
    pub frozen_size: usize,
    pub total_seconds: f64,
    pub config: Entries,
}

#[derive(Debug, Clone)]
pub struct FigureReport {
    pub dir: PathBuf,
    pub metrics: FigureMetrics,
}

impl FigureReport {
    pub fn converged(&self) -> bool {
        self.metrics.deterministic.converged && self.metrics.perturbed.converged
    }
}

/// Writes `deterministic/` and `perturbed/` spectra, the symbol range, the frozen sections for
/// the banded figures, `figure.svg`, `config.txt` and `metrics.json` under `cfg.out`.
/// The figure fixes the symbol; size, seed, noise and output directory come from `cfg`.
pub fn reproduce_figure(id: FigureId, cfg: &ExperimentConfig) -> CliResult<FigureReport> {
    let t0 = Instant::now();
    let n = match cfg.n.as_slice() {
        [n] => *n,
        _ => return Err(CliError::Input("a figure takes a single matrix size".into())),
    };
    let mut cfg = cfg.clone();
    cfg.symbol = SymbolSpec::Preset(id.preset().into());
    let sym = cfg.symbol()?;
    let dir = cfg.out.clone();
    io::ensure_dir(&dir)?;

    let (deterministic, perturbed) =
        rayon::join(|| solve(&sym, &cfg, n, Mode::Deterministic), || solve(&sym, &cfg, n, Mode::Perturbed));
    let (deterministic, perturbed) = (deterministic?, perturbed?);
    let limit = limit_data(&sym, &cfg)?;
    let range = symbol_range(&sym)?;

    let frozen_x = id.frozen_x();
    let frozen: Vec<(f64, Vec<Complex64>)> = {
        use rayon::prelude::*;
        frozen_x
            .par_iter()
            .map(|&x| Ok((x, frozen_esm(&sym.frozen(x)?, cfg.limit.section)?.points)))
            .collect::<twistspec_core::Result<_>>()?
    };

    for (sub, run) in [("deterministic", &deterministic), ("perturbed", &perturbed)] {
        io::ensure_dir(&dir.join(sub))?;
        io::write_points(&dir.join(sub).join("eigenvalues.csv"), &run.spectrum.values)?;
    }
    io::write_points(&dir.join("range.csv"), &range.points)?;
    io::write_points(&dir.join("limit_samples.csv"), &limit.samples.points)?;
    if !frozen.is_empty() {
        io::write_text(&dir.join("frozen.csv"), &io::tagged_points_csv(&frozen))?;
    }

    let window = plot_window(&sym)?;
    let range_layer = || Layer::new("symbol range", svg::BLUE, 0.8, range.points.clone());
    let panels = if frozen.is_empty() {
        vec![
            Panel::fitted(
                &format!("T_{n}"),
                window,
                vec![range_layer(), Layer::new("eigenvalues", svg::RED, 1.6, deterministic.spectrum.values.clone())],
            ),
            Panel::fitted(
                &format!("R_{n}"),
                window,
                vec![
                    range_layer(),
                    Layer::new("limit support", svg::BLACK, 0.8, limit.support.points.clone()),
                    Layer::new("eigenvalues", svg::RED, 1.6, perturbed.spectrum.values.clone()),
                ],
            ),
        ]
    } else {
        let frozen_points: Vec<Complex64> = frozen.iter().flat_map(|(_, p)| p.iter().copied()).collect();
        vec![
            Panel::fitted(
                &format!("T_{n} and R_{n}"),
                window,
                vec![
                    range_layer(),
                    Layer::new("unperturbed", svg::GREEN, 1.4, deterministic.spectrum.values.clone()),
                    Layer::new("perturbed", svg::RED, 1.4, perturbed.spectrum.values.clone()),
                ],
            ),
            Panel::fitted(
                &format!("frozen sections, m = {}", cfg.limit.section),
                window,
                vec![range_layer(), Layer::new("frozen eigenvalues", svg::RED, 1.2, frozen_points)],
            ),
        ]
    };
    io::write_text(&dir.join("figure.svg"), &svg::render(&panels))?;

    let values = PointCloud::new(perturbed.spectrum.values.clone());
    let w1 =
        sliced_w1(&EmpiricalMeasure::new(values.clone())?, &EmpiricalMeasure::new(limit.samples.clone())?, cfg.angles)?;
    let h = hausdorff(&values, &limit.support)?;

    let mut echo = cfg.clone();
    echo.mode = Mode::Perturbed;
    io::write_text(&dir.join("config.txt"), &echo.to_text())?;
    let metrics = FigureMetrics {
        figure: id.to_string(),
        n,
        seed: cfg.seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        sigma: cfg.sigma.resolve(n),
        deterministic: PanelMetrics::from(&deterministic),
        perturbed: PanelMetrics::from(&perturbed),
        sliced_w1: w1,
        hausdorff_to_support: h,
        frozen_size: if frozen_x.is_empty() { 0 } else { cfg.limit.section },
        frozen_x,
        total_seconds: t0.elapsed().as_secs_f64(),
        config: echo.to_entries(),
    };
    io::write_json(&dir.join("metrics.json"), &metrics)?;
    Ok(FigureReport { dir, metrics })
}
