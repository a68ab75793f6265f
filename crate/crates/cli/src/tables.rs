//! The `potential`, `limit` and `compare` subcommands.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use twistspec_core::limits::schmidt_spitzer_set;
use twistspec_core::rng::RNG_ALGORITHM;
use twistspec_core::{gamma_field, hausdorff, integrated_gamma, sliced_w1, Complex64, EmpiricalMeasure, PointCloud};

use crate::config::{Entries, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::io;
use crate::run::{limit_data, plot_window, symbol_range};
use crate::svg::{self, Layer, Panel};

#[derive(Debug, Clone, Serialize)]
pub struct PotentialMetrics {
    pub grid: usize,
    pub x: f64,
    pub nodes: usize,
    pub window: [f64; 4],
    pub seconds: f64,
    pub config: Entries,
}

/// Tabulates the pointwise exponent at `potential.x` and its integral over `x` on a square
/// `z`-grid spanning the plot window. Rows are `re,im,gamma_x,integrated_gamma`.
pub fn potential_table(cfg: &ExperimentConfig) -> CliResult<PotentialMetrics> {
    let t0 = Instant::now();
    let sym = cfg.symbol()?;
    let tri =
        sym.as_tridiagonal().ok_or_else(|| CliError::Input("the potential table needs a tridiagonal symbol".into()))?;
    let w = plot_window(&sym)?;
    let g = cfg.potential.grid;
    let rows: Vec<String> = (0..g)
        .into_par_iter()
        .map(|iy| {
            let im = w.min.im + w.height() * iy as f64 / (g - 1) as f64;
            let mut block = String::new();
            for ix in 0..g {
                let z = Complex64::new(w.min.re + w.width() * ix as f64 / (g - 1) as f64, im);
                let pointwise = gamma_field(&tri, cfg.potential.x, z)?;
                let integrated = integrated_gamma(&tri, z, cfg.potential.nodes)?;
                let _ = writeln!(block, "{:.16e},{:.16e},{pointwise:.16e},{integrated:.16e}", z.re, z.im);
            }
            Ok(block)
        })
        .collect::<twistspec_core::Result<_>>()?;
    io::ensure_dir(&cfg.out)?;
    let mut text = String::from("re,im,gamma_x,integrated_gamma\n");
    rows.iter().for_each(|r| text.push_str(r));
    io::write_text(&cfg.out.join("potential.csv"), &text)?;
    io::write_text(&cfg.out.join("config.txt"), &cfg.to_text())?;
    let metrics = PotentialMetrics {
        grid: g,
        x: cfg.potential.x,
        nodes: cfg.potential.nodes,
        window: [w.min.re, w.max.re, w.min.im, w.max.im],
        seconds: t0.elapsed().as_secs_f64(),
        config: cfg.to_entries(),
    };
    io::write_json(&cfg.out.join("metrics.json"), &metrics)?;
    Ok(metrics)
}

#[derive(Debug, Clone, Serialize)]
pub struct LocusSlice {
    pub x: f64,
    pub points: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitMetrics {
    pub seed: u64,
    pub rng_algorithm: String,
    pub limit_kind: String,
    pub limit_samples: usize,
    pub support_points: usize,
    pub locus: Vec<LocusSlice>,
    pub hausdorff_support_to_range: f64,
    pub seconds: f64,
    pub config: Entries,
}

/// Samples the limit measure, its support and the frozen root loci at `limit.x`.
pub fn limit_tables(cfg: &ExperimentConfig) -> CliResult<LimitMetrics> {
    let t0 = Instant::now();
    let sym = cfg.symbol()?;
    let limit = limit_data(&sym, cfg)?;
    let range = symbol_range(&sym)?;
    let base = plot_window(&sym)?;
    let window = limit.support.bounding_box().map_or(base, |b| base.union(&b.padded(0.05)));
    let cells = cfg.limit.grid;
    let loci: Vec<(f64, Vec<Complex64>, usize)> = cfg
        .limit
        .x
        .iter()
        .map(|&x| {
            let locus = schmidt_spitzer_set(&sym.frozen(x)?, &window, (cells, cells), cfg.limit.tolerance)?;
            Ok((x, locus.cloud.points, locus.skipped))
        })
        .collect::<twistspec_core::Result<_>>()?;

    io::ensure_dir(&cfg.out)?;
    io::write_points(&cfg.out.join("limit_samples.csv"), &limit.samples.points)?;
    io::write_points(&cfg.out.join("support.csv"), &limit.support.points)?;
    io::write_points(&cfg.out.join("range.csv"), &range.points)?;
    let groups: Vec<(f64, Vec<Complex64>)> = loci.iter().map(|(x, p, _)| (*x, p.clone())).collect();
    io::write_text(&cfg.out.join("locus.csv"), &io::tagged_points_csv(&groups))?;
    let locus_points: Vec<Complex64> = groups.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    let panel = Panel::fitted(
        "limit support",
        window,
        vec![
            Layer::new("symbol range", svg::BLUE, 0.8, range.points.clone()),
            Layer::new("limit support", svg::BLACK, 0.8, limit.support.points.clone()),
            Layer::new("frozen root loci", svg::RED, 1.0, locus_points),
        ],
    );
    io::write_text(&cfg.out.join("limit.svg"), &svg::render(&[panel]))?;
    io::write_text(&cfg.out.join("config.txt"), &cfg.to_text())?;
    let metrics = LimitMetrics {
        seed: cfg.seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        limit_kind: limit.kind.to_string(),
        limit_samples: limit.samples.len(),
        support_points: limit.support.len(),
        locus: loci.iter().map(|(x, p, s)| LocusSlice { x: *x, points: p.len(), skipped: *s }).collect(),
        hausdorff_support_to_range: hausdorff(&limit.support, &range)?,
        seconds: t0.elapsed().as_secs_f64(),
        config: cfg.to_entries(),
    };
    io::write_json(&cfg.out.join("metrics.json"), &metrics)?;
    Ok(metrics)
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub points_a: usize,
    pub points_b: usize,
    pub angles: usize,
    pub sliced_w1: f64,
    pub hausdorff: f64,
}

pub fn compare_clouds(a: &PointCloud, b: &PointCloud, angles: usize) -> CliResult<Comparison> {
    let w1 = sliced_w1(&EmpiricalMeasure::new(a.clone())?, &EmpiricalMeasure::new(b.clone())?, angles)?;
    Ok(Comparison { points_a: a.len(), points_b: b.len(), angles, sliced_w1: w1, hausdorff: hausdorff(a, b)? })
}

pub fn compare_files(a: &Path, b: &Path, angles: usize) -> CliResult<Comparison> {
    compare_clouds(&io::read_points(a)?, &io::read_points(b)?, angles)
}
