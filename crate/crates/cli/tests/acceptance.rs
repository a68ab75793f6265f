//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run a subset by passing criterion numbers: `cargo test --test acceptance -- 1 4 12`.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistspec_core::limits::{
    default_window, frozen_esm, DEFAULT_LOCUS_GRID, DEFAULT_LOCUS_TOLERANCE, DEFAULT_WINDOW_PADDING,
};
use twistspec_core::linalg::{assemble_block, block_det, match_spectra};
use twistspec_core::potential::{cone_diagnostics, theta_ratio};
use twistspec_core::symbol::sample_intervals;
use twistspec_core::{
    build_perturbed, build_randomized, build_twisted, continuant_log_det, eigenvalues, esm, frozen_gamma, hausdorff,
    log_abs_det, mu_sample, presets, sample_order_statistics, schmidt_spitzer_set, sliced_w1, BandedMatrix, Complex64,
    DenseMatrix, EmpiricalMeasure, FrozenLaurent, FrozenSymbol, LaurentSymbol, NoiseDist, NoiseSpec, Sigma,
    TridiagonalSymbol,
};

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn polar(r: f64, t: f64) -> Complex64 {
    Complex64::from_polar(r, t)
}

fn tridiagonal(n: usize, b: Complex64, cc: Complex64, d: Complex64) -> BandedMatrix {
    let mut m = BandedMatrix::zeros(n, 1, 1);
    m.diagonal_mut(0).fill(b);
    m.diagonal_mut(1).fill(cc);
    m.diagonal_mut(-1).fill(d);
    m
}

/// Determinant by Laplace expansion along the rows, memoised over the set of used columns.
fn cofactor_det(a: &[Vec<Complex64>]) -> Complex64 {
    let n = a.len();
    let mut f = vec![Complex64::new(0.0, 0.0); 1 << n];
    f[0] = Complex64::new(1.0, 0.0);
    for mask in 0usize..(1 << n) {
        if f[mask] == Complex64::new(0.0, 0.0) {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for j in 0..n {
            if mask & (1 << j) != 0 {
                continue;
            }
            let sign = if (mask >> (j + 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            let term = f[mask] * a[row][j] * sign;
            f[mask | (1 << j)] += term;
        }
    }
    f[(1 << n) - 1]
}

fn dense_rows(m: &DenseMatrix) -> Vec<Vec<Complex64>> {
    (0..m.n()).map(|i| (0..m.n()).map(|k| m[(i, k)]).collect()).collect()
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn criterion_1() -> Outcome {
    let corpus: [(Complex64, Complex64, Complex64); 10] = [
        (c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)),
        (c(1.0, 0.0), c(0.5, 0.0), c(2.0, 0.0)),
        (c(0.0, 0.0), c(0.25, 0.0), c(4.0, 0.0)),
        (c(2.0, -1.0), c(1.0, 1.0), c(1.0, -1.0)),
        (c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)),
        (c(-1.0, 0.0), c(3.0, 0.0), c(0.1, 0.0)),
        (c(0.0, 0.5), c(-1.0, 0.0), c(0.0, 2.0)),
        (c(1.0, 1.0), polar(2.0, PI / 3.0), polar(0.5, -PI / 5.0)),
        (c(3.0, 0.0), c(-0.7, 0.0), c(-0.7, 0.0)),
        (c(0.0, 0.0), c(0.0, 0.25), c(0.0, 1.0)),
    ];
    let closed_form = |b: Complex64, cc: Complex64, d: Complex64, n: usize| -> Vec<Complex64> {
        (1..=n).map(|k| b + 2.0 * (cc * d).sqrt() * (k as f64 * PI / (n + 1) as f64).cos()).collect()
    };
    // The closed form must annihilate the characteristic polynomial at small sizes, with n
    // distinct roots (so it is the whole spectrum).
    for &(b, cc, d) in &corpus {
        for n in 1..=6 {
            let dense = DenseMatrix::from(&tridiagonal(n, b, cc, d));
            let scale = 1.0 + b.norm() + cc.norm() + d.norm();
            let roots = closed_form(b, cc, d, n);
            for (k, &lambda) in roots.iter().enumerate() {
                let mut rows = dense_rows(&dense);
                for (i, row) in rows.iter_mut().enumerate() {
                    row[i] -= lambda;
                }
                let p = cofactor_det(&rows).norm();
                if p > 1e-10 * (scale + lambda.norm()).powi(n as i32) {
                    return Err(format!("oracle fails: symbol ({b}, {cc}, {d}), n = {n}, root {k}: |p| = {p:e}"));
                }
                if roots[..k].iter().any(|r| (r - lambda).norm() < 1e-9) {
                    return Err(format!("oracle has a repeated root for ({b}, {cc}, {d}), n = {n}"));
                }
            }
        }
    }
    let n = 200;
    let mut worst = 0.0f64;
    for &(b, cc, d) in &corpus {
        let spectrum = eigenvalues(&tridiagonal(n, b, cc, d)).require_converged().map_err(|e| e.to_string())?;
        let err = match_spectra(&spectrum.values, &closed_form(b, cc, d, n));
        worst = worst.max(err);
        if err > 1e-8 {
            return Err(format!("symbol ({b}, {cc}, {d}): matched error {err:e} > 1e-8"));
        }
    }
    Ok(format!("10 symbols, n = 200, worst matched error {worst:.2e} (tol 1e-8)"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for case in 0..200 {
        let n = rng.random_range(2..=500usize);
        let mut m = BandedMatrix::zeros(n, 1, 1);
        for off in -1isize..=1 {
            for v in m.diagonal_mut(off) {
                *v = random_unit(&mut rng);
            }
        }
        let values = eigenvalues(&m).require_converged().map_err(|e| e.to_string())?.values;
        let z = loop {
            let z = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            if values.iter().all(|l| (l - z).norm() > 0.05) {
                break z;
            }
        };
        let cont = continuant_log_det(&m, z).map_err(|e| e.to_string())?;
        let lu = log_abs_det(&m, z);
        let eig: f64 = values.iter().map(|l| (l - z).norm().ln()).sum();
        let spread = (cont - lu).abs().max((cont - eig).abs()).max((lu - eig).abs());
        worst = worst.max(spread / n as f64);
        if spread > 1e-6 * n as f64 {
            return Err(format!("case {case} (n = {n}, z = {z}): continuant {cont}, LU {lu}, eigenvalues {eig}"));
        }
    }
    Ok(format!("200 random tridiagonals, worst spread / n = {worst:.2e} (tol 1e-6)"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let r = rng.random_range(1..=6usize);
        let s = rng.random_range(1..=6usize);
        let mut block = |k: usize| {
            let rows: Vec<Vec<Complex64>> = (0..k).map(|_| (0..k).map(|_| random_unit(&mut rng)).collect()).collect();
            DenseMatrix::from_rows(&rows)
        };
        let (m, nb) = (block(r), block(s));
        let (x, y) = (random_unit(&mut rng), random_unit(&mut rng));
        let fast = block_det(&m, &nb, x, y);
        let exact = cofactor_det(&dense_rows(&assemble_block(&m, &nb, x, y)));
        let rel = (fast - exact).norm() / exact.norm();
        worst = worst.max(rel);
        if rel.is_nan() || rel > 1e-12 {
            return Err(format!("case {case} (r = {r}, s = {s}): block {fast} vs cofactor {exact}, relative {rel:e}"));
        }
    }
    Ok(format!("1000 instances, worst relative error {worst:.2e} (tol 1e-12)"))
}

/// Twenty points at distance at least 0.5 from `[-2, 2]`.
fn far_points() -> Vec<Complex64> {
    let mut pts = Vec::new();
    for t in [-1.8, -1.0, 0.0, 1.0, 1.8] {
        pts.push(c(t, 0.6));
        pts.push(c(t, -0.6));
    }
    for k in 0..10 {
        pts.push(polar(3.0, 2.0 * PI * (k as f64 + 0.25) / 10.0));
    }
    pts
}

fn criterion_4() -> Outcome {
    let sym = LaurentSymbol::from_pairs(&[(-1, "1"), (1, "1")]).unwrap();
    let reference = FrozenSymbol::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
    let points = far_points();
    for z in &points {
        let dist = if z.re.abs() <= 2.0 { z.im.abs() } else { (z - c(2.0 * z.re.signum(), 0.0)).norm() };
        assert!(dist >= 0.5);
    }
    let n = 2000;
    let noise = NoiseSpec::real(NoiseDist::StandardNormal);
    let sigma = Sigma::Value(1.0 / (n as f64).sqrt());
    let mut good_seeds = 0;
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let m = build_perturbed(&sym, n, sigma.resolve(n), &noise, seed).map_err(|e| e.to_string())?;
        let mut ok = true;
        for &z in &points {
            let dev =
                (continuant_log_det(&m, z).map_err(|e| e.to_string())? / n as f64 - frozen_gamma(&reference, z)).abs();
            worst = worst.max(dev);
            ok &= dev < 0.05;
        }
        good_seeds += ok as usize;
    }
    let msg = format!("{good_seeds}/100 seeds within 0.05 at all 20 points, worst deviation {worst:.2e}");
    if good_seeds >= 95 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

const SIZES: [usize; 4] = [125, 250, 500, 1000];
const SEEDS: u64 = 10;

fn convergence(build: impl Fn(&LaurentSymbol, usize, u64) -> BandedMatrix) -> Outcome {
    let tri = presets::fig1();
    let sym = tri.to_laurent();
    let mut per_size: Vec<Vec<f64>> = vec![Vec::new(); SIZES.len()];
    let mut decreasing_seeds = 0;
    for seed in 0..SEEDS {
        let limit = EmpiricalMeasure::new(mu_sample(&tri, 100_000, seed).map_err(|e| e.to_string())?).unwrap();
        let mut curve = Vec::new();
        for (i, &n) in SIZES.iter().enumerate() {
            let spectrum = eigenvalues(&build(&sym, n, seed));
            let measure = esm(&spectrum).map_err(|e| format!("n = {n}, seed {seed}: {e}"))?;
            let d = sliced_w1(&measure, &limit, 32).unwrap();
            per_size[i].push(d);
            curve.push(d);
        }
        decreasing_seeds += curve.windows(2).all(|w| w[1] < w[0]) as usize;
    }
    let medians: Vec<f64> = per_size.iter_mut().map(|v| median(v)).collect();
    let strictly = medians.windows(2).all(|w| w[1] < w[0]);
    let msg = format!(
        "median sliced W1 over {SEEDS} seeds at n = {SIZES:?}: {}; strictly decreasing: {strictly} \
         (individually decreasing in {decreasing_seeds}/{SEEDS} seeds)",
        medians.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>().join(", ")
    );
    if strictly && medians[3] < 0.05 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_5() -> Outcome {
    convergence(|sym, n, seed| build_perturbed(sym, n, 1.0 / n as f64, &NoiseSpec::default(), seed).unwrap())
}

fn criterion_6() -> Outcome {
    convergence(|sym, n, seed| build_randomized(sym, n, seed).unwrap())
}

fn criterion_7() -> Outcome {
    let tri = presets::fig2();
    let sym = tri.to_laurent();
    let n = 500;
    let m = build_perturbed(&sym, n, 1.0 / n as f64, &NoiseSpec::default(), 0).map_err(|e| e.to_string())?;
    let values = eigenvalues(&m).require_converged().map_err(|e| e.to_string())?.values;
    let segment_distance = |z: &Complex64| (z - c(0.0, z.im.clamp(-0.2, 0.2))).norm();
    let near = values.iter().filter(|z| segment_distance(z) <= 0.05).count() as f64 / n as f64;
    let support = sample_intervals(&tri.xi_support(200).map_err(|e| e.to_string())?, 50);
    let range = sym.range(200, 256).map_err(|e| e.to_string())?;
    let h = hausdorff(&support, &range).unwrap();
    let msg =
        format!("{:.1}% of eigenvalues within 0.05 of the segment, support-to-range Hausdorff {h:.3}", 100.0 * near);
    if near >= 0.95 && h > 0.5 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_8() -> Outcome {
    let (nx, nt, per_interval) = (50, 256, 129);
    let mut report = Vec::new();
    let mut ok = true;
    for sym in presets::symmetric_examples() {
        let support = sample_intervals(&sym.xi_support(nx).map_err(|e| e.to_string())?, per_interval);
        let range = sym.to_laurent().range(nx, nt).map_err(|e| e.to_string())?;
        // Sampling resolution: the largest gap between consecutive samples along either curve family.
        let mut resolution = 0.0f64;
        for r in 0..=nx {
            let ring = &range.points[r * nt..(r + 1) * nt];
            for s in 0..nt {
                resolution = resolution.max((ring[(s + 1) % nt] - ring[s]).norm());
            }
            let seg = &support.points[r * per_interval..(r + 1) * per_interval];
            for w in seg.windows(2) {
                resolution = resolution.max((w[1] - w[0]).norm());
            }
        }
        let h = hausdorff(&support, &range).unwrap();
        ok &= h < 2.0 * resolution;
        report.push(format!("{h:.2e} vs 2 x {resolution:.2e}"));
    }
    let msg = format!("Hausdorff vs resolution: {}", report.join("; "));
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_9() -> Outcome {
    let cells = (DEFAULT_LOCUS_GRID, DEFAULT_LOCUS_GRID);
    let mut tri_cases: Vec<(String, FrozenSymbol)> =
        vec![("(0, 1, 1)".into(), FrozenSymbol::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)))];
    for x in [0.0, 0.5, 1.0] {
        tri_cases.push((format!("fig1 x = {x}"), presets::fig1().frozen(x).unwrap()));
    }
    tri_cases.push(("fig2 x = 0".into(), presets::fig2().frozen(0.0).unwrap()));
    let mut worst_cells = 0.0f64;
    for (name, f) in &tri_cases {
        let interval = f.interval();
        let segment = sample_intervals(&[interval], 2001);
        let window = segment.bounding_box().unwrap().padded(DEFAULT_WINDOW_PADDING);
        let laurent = FrozenLaurent { lower: 1, upper: 1, coeffs: vec![f.d, f.b, f.c] };
        let locus =
            schmidt_spitzer_set(&laurent, &window, cells, DEFAULT_LOCUS_TOLERANCE).map_err(|e| e.to_string())?;
        let cell = (window.width() / cells.0 as f64).hypot(window.height() / cells.1 as f64);
        let h = hausdorff(&locus.cloud, &segment).map_err(|e| format!("{name}: {e}"))?;
        worst_cells = worst_cells.max(h / cell);
        if h >= 2.0 * cell {
            return Err(format!("{name}: Hausdorff {h:.4} >= 2 cells ({cell:.4})"));
        }
    }
    let mut worst_fraction = 1.0f64;
    let banded = [(presets::ex4(), 4usize), (presets::ex5(), 8usize)];
    for (sym, parts) in &banded {
        let window = default_window(sym, DEFAULT_WINDOW_PADDING).map_err(|e| e.to_string())?;
        for r in 0..=*parts {
            let x = r as f64 / *parts as f64;
            let f = sym.frozen(x).map_err(|e| e.to_string())?;
            let eigs = frozen_esm(&f, 300).map_err(|e| e.to_string())?;
            let locus = schmidt_spitzer_set(&f, &window, cells, DEFAULT_LOCUS_TOLERANCE).map_err(|e| e.to_string())?;
            let fraction = eigs.fraction_within(&locus.cloud, 0.1).map_err(|e| format!("x = {x}: {e}"))?;
            worst_fraction = worst_fraction.min(fraction);
            if fraction < 0.95 {
                return Err(format!(
                    "banded symbol at x = {x}: only {:.1}% of frozen eigenvalues near the locus",
                    100.0 * fraction
                ));
            }
        }
    }
    Ok(format!(
        "tridiagonal worst Hausdorff {worst_cells:.2} cells (tol 2); banded worst fraction within 0.1 {:.1}% (tol 95%)",
        100.0 * worst_fraction
    ))
}

fn criterion_10() -> Outcome {
    let n = 10_000usize;
    let alpha: f64 = 0.01;
    let eps = ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt();
    let mut within = 0;
    let mut largest = 0.0f64;
    for seed in 0..1000 {
        let xs = sample_order_statistics(n, seed);
        let dev = xs.points.iter().enumerate().map(|(i, x)| (x - (i + 1) as f64 / n as f64).abs()).fold(0.0, f64::max);
        largest = largest.max(dev);
        within += (dev <= eps) as usize;
    }
    let msg = format!("{within}/1000 seeds with max |x_(i) - i/n| <= {eps:.5} (largest {largest:.5})");
    if within as f64 >= (1.0 - alpha) * 1000.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut accepted = 0;
    let mut drawn = 0;
    while accepted < 50 {
        drawn += 1;
        if drawn > 10_000 {
            return Err(format!("only {accepted} instances satisfied the hypothesis"));
        }
        let b = random_unit(&mut rng);
        let cc = polar(rng.random_range(0.5..1.5), rng.random_range(0.0..2.0 * PI));
        let d = polar(rng.random_range(0.5..1.5), rng.random_range(0.0..2.0 * PI));
        let f = FrozenSymbol::new(b, cc, d);
        let n = rng.random_range(50..=300usize);
        let amplitude = 10f64.powf(rng.random_range(-4.0..-2.0));
        let mut m = tridiagonal(n, b, cc, d);
        for off in -1isize..=1 {
            for v in m.diagonal_mut(off) {
                *v += amplitude * random_unit(&mut rng);
            }
        }
        let z = b + polar(rng.random_range(3.2..5.0), rng.random_range(0.0..2.0 * PI));
        let report = cone_diagnostics(&m, &f, z).map_err(|e| e.to_string())?;
        if !report.hypothesis_holds() {
            continue;
        }
        accepted += 1;
        if !report.cone_preserved() || !report.ratios_within_bounds() {
            return Err(format!(
                "instance {drawn}: cone exit {:?}, ratio violation {:?}, bounds {:?}",
                report.cone_exit,
                report.ratio_violation,
                report.bounds()
            ));
        }
    }
    Ok(format!("50 of {drawn} random instances satisfied the hypothesis; all stayed in the cone with ratios in bounds"))
}

fn criterion_12() -> Outcome {
    let sym = TridiagonalSymbol::parse("1", "0", "1").unwrap();
    let ks = [50usize, 100, 200, 400];
    let mut worst_200 = 0.0f64;
    for p in 0..10 {
        let xi = (c(0.02, PI * (p as f64 + 0.5) / 10.0)).exp();
        let z = xi + 1.0 / xi;
        let mut errors = Vec::new();
        for &k in &ks {
            let m = build_twisted(&sym.to_laurent(), 2 * k).unwrap();
            errors.push(theta_ratio(&sym, &m, k, 1, z).map_err(|e| format!("z = {z}: {e}"))?.error());
        }
        worst_200 = worst_200.max(errors[2]);
        if errors[2] >= 2e-2 {
            return Err(format!("z = {z}: error {:.3e} at k = 200", errors[2]));
        }
        if !errors.windows(2).all(|w| w[1] < w[0]) {
            return Err(format!("z = {z}: errors {errors:?} not decreasing in k"));
        }
    }
    Ok(format!("10 points, worst error at k = 200: {worst_200:.2e} (tol 2e-2); decreasing over k = {ks:?}"))
}

fn csv_rows(path: &Path) -> Result<usize, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(text.lines().count() - 1)
}

fn same_bytes(a: &Path, b: &Path) -> Result<(), String> {
    let x = std::fs::read(a).map_err(|e| format!("{}: {e}", a.display()))?;
    let y = std::fs::read(b).map_err(|e| format!("{}: {e}", b.display()))?;
    if x == y {
        Ok(())
    } else {
        Err(format!("{} and {} differ", a.display(), b.display()))
    }
}

fn figure(id: &str, args: &[&str]) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_twistspec"))
        .arg("figure")
        .arg(id)
        .args(args)
        .stdout(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if status.success() {
        Ok(())
    } else {
        Err(format!("figure {id} exited with {status}"))
    }
}

fn criterion_13() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let n = 500;
    let mut summary = Vec::new();
    for (id, frozen_rows) in [("fig1", 0), ("fig2", 0), ("fig4", 5 * 300), ("fig5", 9 * 300)] {
        let first = tmp.path().join(format!("{id}-a"));
        let second = tmp.path().join(format!("{id}-b"));
        let echoed = tmp.path().join(format!("{id}-c"));
        figure(id, &["--seed", "7", "--out", first.to_str().unwrap()])?;
        figure(id, &["--seed", "7", "--out", second.to_str().unwrap()])?;
        let config = first.join("config.txt");
        figure(id, &["--config", config.to_str().unwrap(), "--out", echoed.to_str().unwrap()])?;
        if !first.join("figure.svg").exists() || !first.join("metrics.json").exists() {
            return Err(format!("{id}: missing figure.svg or metrics.json"));
        }
        let mut csvs =
            vec!["deterministic/eigenvalues.csv", "perturbed/eigenvalues.csv", "range.csv", "limit_samples.csv"];
        for sub in &csvs[..2] {
            let rows = csv_rows(&first.join(sub))?;
            if rows != n {
                return Err(format!("{id}: {sub} has {rows} rows, expected {n}"));
            }
        }
        if frozen_rows > 0 {
            csvs.push("frozen.csv");
            let rows = csv_rows(&first.join("frozen.csv"))?;
            if rows != frozen_rows {
                return Err(format!("{id}: frozen.csv has {rows} rows, expected {frozen_rows}"));
            }
        }
        for sub in &csvs {
            same_bytes(&first.join(sub), &second.join(sub))?;
            same_bytes(&first.join(sub), &echoed.join(sub))?;
        }
        summary.push(id);
    }
    Ok(format!(
        "{} completed with {n} eigenvalue rows per panel; reruns and echoed configs bit-identical",
        summary.join(", ")
    ))
}

struct Criterion {
    id: usize,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            title: "eigensolver matches closed forms",
            limit: Some(Duration::from_secs(1)),
            run: criterion_1,
        },
        Criterion {
            id: 2,
            title: "determinant triple agreement",
            limit: Some(Duration::from_secs(30)),
            run: criterion_2,
        },
        Criterion { id: 3, title: "block determinant identity", limit: Some(Duration::from_secs(5)), run: criterion_3 },
        Criterion {
            id: 4,
            title: "log-determinant convergence",
            limit: Some(Duration::from_secs(60)),
            run: criterion_4,
        },
        Criterion {
            id: 5,
            title: "perturbed spectra converge",
            limit: Some(Duration::from_secs(20 * 60)),
            run: criterion_5,
        },
        Criterion {
            id: 6,
            title: "randomized spectra converge",
            limit: Some(Duration::from_secs(20 * 60)),
            run: criterion_6,
        },
        Criterion {
            id: 7,
            title: "support disjoint from range",
            limit: Some(Duration::from_secs(30)),
            run: criterion_7,
        },
        Criterion { id: 8, title: "symmetric support equals range", limit: None, run: criterion_8 },
        Criterion { id: 9, title: "root loci consistency", limit: Some(Duration::from_secs(5 * 60)), run: criterion_9 },
        Criterion { id: 10, title: "order statistics deviation bound", limit: None, run: criterion_10 },
        Criterion { id: 11, title: "cone invariance", limit: None, run: criterion_11 },
        Criterion { id: 12, title: "block coupling ratio limit", limit: None, run: criterion_12 },
        Criterion { id: 13, title: "figure reproduction", limit: None, run: criterion_13 },
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for crit in criteria.iter().filter(|c| selected.is_empty() || selected.contains(&c.id)) {
        let start = Instant::now();
        let outcome = (crit.run)();
        let elapsed = start.elapsed();
        let (mut pass, mut detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let timing = match crit.limit {
            Some(limit) => {
                if elapsed > limit {
                    pass = false;
                    detail.push_str(" [over time limit]");
                }
                format!("{:.2}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs())
            }
            None => format!("{:.2}s", elapsed.as_secs_f64()),
        };
        failures += (!pass) as usize;
        println!("{} criterion {:>2} {}: {detail} ({timing})", if pass { "PASS" } else { "FAIL" }, crit.id, crit.title);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
