//! Predicted limiting objects: arcsine measures, their mixture over `x`, the support of the
//! mixture, equal-modulus root loci of banded frozen symbols, and finite-section spectra.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::cloud::{PointCloud, Window};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, polynomial_roots};
use crate::matrix::BandedMatrix;
use crate::rng::{self, Purpose};
use crate::symbol::{FrozenLaurent, LaurentSymbol, TridiagonalSymbol};

/// Finite-section size used for frozen spectra.
pub const DEFAULT_SECTION: usize = 300;
/// Grid cells per side of the root-locus window.
pub const DEFAULT_LOCUS_GRID: usize = 400;
/// Relative modulus gap below which a grid point counts as on the root locus.
pub const DEFAULT_LOCUS_TOLERANCE: f64 = 0.02;
/// Relative padding of the symbol-range bounding box.
pub const DEFAULT_WINDOW_PADDING: f64 = 0.2;

/// `count` draws of `b + 2 sqrt(dc) cos(pi U)` with `U` uniform on `[0, 1]`.
pub fn arcsine_sample(b: Complex64, c: Complex64, d: Complex64, count: usize, seed: u64) -> PointCloud {
    let half_width = 2.0 * (d * c).sqrt();
    let mut rng = rng::stream(seed, Purpose::ArcsineSample);
    (0..count).map(|_| b + half_width * (PI * rng.random::<f64>()).cos()).collect()
}

/// `count` draws from the mixture of arcsine measures over `x` uniform on `[0, 1]`.
pub fn mu_sample(sym: &TridiagonalSymbol, count: usize, seed: u64) -> Result<PointCloud> {
    let mut rng = rng::stream(seed, Purpose::MuSample);
    (0..count)
        .map(|_| {
            let x: f64 = rng.random();
            let t = (PI * rng.random::<f64>()).cos();
            Ok(sym.frozen(x)?.interval().point_at(t))
        })
        .collect()
}

/// Bounding box of the symbol range, padded on every side.
pub fn default_window(sym: &LaurentSymbol, padding: f64) -> Result<Window> {
    let range = sym.range(100, 256)?;
    Ok(range.bounding_box().ok_or(Error::EmptyCloud)?.padded(padding))
}

/// Grid points retained by [`schmidt_spitzer_set`] and the number of skipped grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct RootLocus {
    pub cloud: PointCloud,
    pub skipped: usize,
}

/// Points `lambda` of a `(cells_x + 1) x (cells_y + 1)` node grid over `window` at which the
/// `q`-th and `(q+1)`-th smallest root moduli of `z^q (a(z) - lambda)` satisfy
/// `(|z_{q+1}| - |z_q|) / |z_{q+1}| < tol`. Identically zero outer coefficients are trimmed
/// first; a symbol left with only non-negative (or only non-positive) powers yields the single
/// point `a_0`.
pub fn schmidt_spitzer_set(f: &FrozenLaurent, window: &Window, cells: (usize, usize), tol: f64) -> Result<RootLocus> {
    let (cx, cy) = cells;
    if cx == 0 || cy == 0 {
        return Err(Error::InvalidArgument("grid needs at least one cell per side".into()));
    }
    let f = f.trimmed();
    if f.lower == 0 || f.upper == 0 {
        return Ok(RootLocus { cloud: PointCloud::new(vec![f.coefficient(0)]), skipped: 0 });
    }
    let q = f.lower;
    let rows: Vec<(Vec<Complex64>, usize)> = (0..=cy)
        .into_par_iter()
        .map(|iy| {
            let im = window.min.im + window.height() * iy as f64 / cy as f64;
            let mut kept = Vec::new();
            let mut skipped = 0;
            let mut coeffs = f.coeffs.clone();
            for ix in 0..=cx {
                let lambda = Complex64::new(window.min.re + window.width() * ix as f64 / cx as f64, im);
                coeffs[q] = f.coeffs[q] - lambda;
                let mut moduli: Vec<f64> = match polynomial_roots(&coeffs) {
                    Ok(r) => r.iter().map(|z| z.norm()).collect(),
                    Err(_) => {
                        skipped += 1;
                        continue;
                    }
                };
                moduli.sort_by(f64::total_cmp);
                let (inner, outer) = (moduli[q - 1], moduli[q]);
                if outer > 0.0 && (outer - inner) / outer < tol {
                    kept.push(lambda);
                }
            }
            (kept, skipped)
        })
        .collect();
    let skipped = rows.iter().map(|r| r.1).sum();
    let cloud = rows.into_iter().flat_map(|r| r.0).collect();
    Ok(RootLocus { cloud, skipped })
}

/// `m x m` Toeplitz matrix of a constant symbol (bands clipped to the matrix size).
pub fn toeplitz(f: &FrozenLaurent, m: usize) -> Result<BandedMatrix> {
    if m == 0 {
        return Err(Error::InvalidArgument("matrix dimension must be >= 1".into()));
    }
    let lower = f.lower.min(m - 1);
    let upper = f.upper.min(m - 1);
    let mut t = BandedMatrix::zeros(m, lower, upper);
    for j in -(lower as isize)..=upper as isize {
        t.diagonal_mut(j).fill(f.coefficient(j as i32));
    }
    Ok(t)
}

/// Eigenvalues of the `m x m` Toeplitz matrix of the frozen symbol.
pub fn frozen_esm(f: &FrozenLaurent, m: usize) -> Result<PointCloud> {
    let spectrum = eigenvalues(&toeplitz(f, m)?).require_converged()?;
    Ok(PointCloud::new(spectrum.values))
}

/// Union of [`frozen_esm`] over the grid `x_r = r / nx`, `r = 0..=nx`: an equally weighted
/// proxy for the mixture of the frozen limit measures over `x`.
pub fn frozen_mixture(sym: &LaurentSymbol, nx: usize, m: usize) -> Result<PointCloud> {
    let parts: Vec<PointCloud> =
        (0..=nx).into_par_iter().map(|r| frozen_esm(&sym.frozen(r as f64 / nx as f64)?, m)).collect::<Result<_>>()?;
    let mut all = PointCloud::default();
    for p in &parts {
        all.extend(p);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{hausdorff, sliced_w1, EmpiricalMeasure};
    use crate::presets;
    use crate::symbol::sample_intervals;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn frozen(lower: usize, upper: usize, coeffs: &[Complex64]) -> FrozenLaurent {
        FrozenLaurent { lower, upper, coeffs: coeffs.to_vec() }
    }

    #[test]
    fn arcsine_samples_lie_on_segment() {
        let (b, cc, d) = (c(1.0, -1.0), c(0.3, 0.2), c(-0.5, 1.0));
        let cloud = arcsine_sample(b, cc, d, 10_000, 3);
        let iv = crate::potential::FrozenSymbol::new(b, cc, d).interval();
        for p in cloud.iter() {
            assert!(iv.distance(*p) < 1e-14);
        }
        let degenerate = arcsine_sample(b, ZERO, d, 5, 3);
        assert!(degenerate.iter().all(|p| *p == b));
    }

    const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

    #[test]
    fn arcsine_median_and_mean() {
        let n = 100_000;
        let cloud = arcsine_sample(ZERO, c(1.0, 0.0), c(1.0, 0.0), n, 4);
        let below = cloud.iter().filter(|p| p.re <= 0.0).count() as f64 / n as f64;
        let dkw = ((2.0f64 / 0.01).ln() / (2.0 * n as f64)).sqrt();
        assert!((below - 0.5).abs() <= dkw);

        let n = 1_000_000;
        let (b, cc, d) = (c(0.5, 0.5), c(0.0, 1.0), c(2.0, 0.0));
        let cloud = arcsine_sample(b, cc, d, n, 5);
        let mean: Complex64 = cloud.iter().sum::<Complex64>() / n as f64;
        let w = (2.0 * (d * cc).sqrt()).norm();
        assert!((mean - b).norm() <= 4.0 * w / (2.0 * n as f64).sqrt());
    }

    #[test]
    fn mu_sample_fig2_is_imaginary() {
        let cloud = mu_sample(&presets::fig2(), 20_000, 6).unwrap();
        for p in cloud.iter() {
            assert!(p.re.abs() < 1e-15);
            assert!(p.im.abs() <= 0.2 + 1e-15);
        }
    }

    #[test]
    fn mu_sample_constant_symbol_matches_arcsine() {
        let sym = TridiagonalSymbol::parse("1", "i", "2").unwrap();
        let mu = EmpiricalMeasure::new(mu_sample(&sym, 100_000, 7).unwrap()).unwrap();
        let arc = EmpiricalMeasure::new(arcsine_sample(c(0.0, 1.0), c(2.0, 0.0), c(1.0, 0.0), 100_000, 8)).unwrap();
        assert!(sliced_w1(&mu, &arc, 32).unwrap() < 0.01);
    }

    #[test]
    fn branch_invariance() {
        // Negating the half-width is the same as swapping the sign of sqrt(dc).
        let (b, cc, d) = (c(0.2, 0.0), c(0.0, 1.0), c(0.0, 0.25));
        let plus = arcsine_sample(b, cc, d, 100_000, 9);
        let minus: PointCloud = arcsine_sample(b, cc, d, 100_000, 10).iter().map(|p| 2.0 * b - p).collect();
        let d1 = sliced_w1(&EmpiricalMeasure::new(plus).unwrap(), &EmpiricalMeasure::new(minus).unwrap(), 32).unwrap();
        assert!(d1 < 0.01);
    }

    #[test]
    fn mu_samples_lie_in_range_for_symmetric_symbols() {
        for sym in presets::symmetric_examples() {
            let range = sym.to_laurent().range(400, 1024).unwrap();
            let samples = mu_sample(&sym, 2_000, 11).unwrap();
            let within = samples.fraction_within(&range, 0.02).unwrap();
            assert_eq!(within, 1.0);
        }
    }

    #[test]
    fn root_locus_membership() {
        let f = frozen(1, 1, &[c(1.0, 0.0), ZERO, c(1.0, 0.0)]);
        let tiny = |z: Complex64| Window { min: z, max: z };
        let on = schmidt_spitzer_set(&f, &tiny(ZERO), (1, 1), 0.02).unwrap();
        assert_eq!(on.cloud.len(), 4);
        let off = schmidt_spitzer_set(&f, &tiny(c(3.0, 0.0)), (1, 1), 0.02).unwrap();
        assert!(off.cloud.is_empty());
    }

    #[test]
    fn root_locus_triangular_collapses_to_point() {
        let f = frozen(2, 2, &[ZERO, ZERO, c(1.0, 1.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let w = Window { min: c(-5.0, -5.0), max: c(5.0, 5.0) };
        let locus = schmidt_spitzer_set(&f, &w, (10, 10), 0.02).unwrap();
        assert_eq!(locus.cloud.points, vec![c(1.0, 1.0)]);
    }

    #[test]
    fn root_locus_tridiagonal_matches_interval() {
        let cases = [
            ((ZERO, c(1.0, 0.0), c(1.0, 0.0)), Window { min: c(-2.4, -0.3), max: c(2.4, 0.3) }),
            ((c(0.5, 0.0), c(0.0, 0.25), c(0.0, 1.0)), Window { min: c(0.4, -1.2), max: c(0.6, 1.2) }),
        ];
        for ((b, cc, d), window) in cases {
            let f = frozen(1, 1, &[d, b, cc]);
            let locus =
                schmidt_spitzer_set(&f, &window, (DEFAULT_LOCUS_GRID, DEFAULT_LOCUS_GRID), DEFAULT_LOCUS_TOLERANCE)
                    .unwrap();
            let segment = sample_intervals(&[crate::potential::FrozenSymbol::new(b, cc, d).interval()], 2001);
            let cell = (window.width() / 400.0).hypot(window.height() / 400.0);
            let h = hausdorff(&locus.cloud, &segment).unwrap();
            assert!(h < 2.0 * cell, "hausdorff {h} vs cell {cell}");
        }
    }

    #[test]
    fn frozen_esm_small_cases() {
        let f = frozen(1, 1, &[c(1.0, 0.0), ZERO, c(1.0, 0.0)]);
        let e = frozen_esm(&f, 4).unwrap();
        let g = (1.0 + 5f64.sqrt()) / 2.0;
        let expected = [c(g, 0.0), c(-g, 0.0), c(g - 1.0, 0.0), c(1.0 - g, 0.0)];
        assert!(crate::linalg::match_spectra(&e.points, &expected) < 1e-12);
        let one = frozen_esm(&presets::ex4().frozen(0.5).unwrap(), 1).unwrap();
        assert_eq!(one.points, vec![c(0.5, 0.0)]);
    }

    #[test]
    fn banded_frozen_spectra_follow_root_locus() {
        for (sym, x) in [(presets::ex4(), 0.0), (presets::ex4(), 1.0), (presets::ex5(), 0.5)] {
            let f = sym.frozen(x).unwrap();
            let window = default_window(&sym, DEFAULT_WINDOW_PADDING).unwrap();
            let eigs = frozen_esm(&f, DEFAULT_SECTION).unwrap();
            let locus =
                schmidt_spitzer_set(&f, &window, (DEFAULT_LOCUS_GRID, DEFAULT_LOCUS_GRID), DEFAULT_LOCUS_TOLERANCE)
                    .unwrap();
            assert_eq!(locus.skipped, 0);
            let fraction = eigs.fraction_within(&locus.cloud, 0.1).unwrap();
            assert!(fraction >= 0.95, "x = {x}: {fraction}");
        }
    }
}
