//! Banded complex matrices and the twisted Toeplitz builders.
//!
//! Index convention: entry `(i, k)` (1-based) is `a_{k-i}(min(i, k) / n)`, so the first
//! superdiagonal carries `c` and the first subdiagonal carries `d`. This is the layout of the
//! displayed tridiagonal matrix `T_n(a)`, and the transpose of the literal formula
//! `a_{i-k}(min(i, k)/n)`. Transposition leaves every spectrum unchanged.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::{self, Purpose};
use crate::symbol::LaurentSymbol;

/// `n x n` matrix with `lower` subdiagonals and `upper` superdiagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    /// `diags[j + lower]` holds offset `j = k - i`; element `t` sits at row/column
    /// `min(i, k) = t` (0-based) and the diagonal has `n - |j|` entries.
    diags: Vec<Vec<Complex64>>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        let diags = (-(lower as isize)..=upper as isize)
            .map(|j| vec![Complex64::new(0.0, 0.0); n.saturating_sub(j.unsigned_abs())])
            .collect();
        BandedMatrix { n, lower, upper, diags }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn is_tridiagonal(&self) -> bool {
        self.lower <= 1 && self.upper <= 1
    }

    /// Entries on offset `j = k - i`, ordered by `min(i, k)`.
    pub fn diagonal(&self, offset: isize) -> &[Complex64] {
        &self.diags[(offset + self.lower as isize) as usize]
    }

    pub fn diagonal_mut(&mut self, offset: isize) -> &mut [Complex64] {
        &mut self.diags[(offset + self.lower as isize) as usize]
    }

    /// Entry `(i, k)`, 0-based. Out-of-band positions are zero.
    pub fn get(&self, i: usize, k: usize) -> Complex64 {
        let j = k as isize - i as isize;
        if j < -(self.lower as isize) || j > self.upper as isize {
            return Complex64::new(0.0, 0.0);
        }
        self.diagonal(j)[i.min(k)]
    }

    /// Sets an in-band entry; panics outside the band.
    pub fn set(&mut self, i: usize, k: usize, value: Complex64) {
        let j = k as isize - i as isize;
        assert!(j >= -(self.lower as isize) && j <= self.upper as isize, "({i}, {k}) outside band");
        self.diagonal_mut(j)[i.min(k)] = value;
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for j in -(self.lower as isize)..=self.upper as isize {
            for (t, v) in self.diagonal(j).iter().enumerate() {
                let (i, k) = if j >= 0 { (t, t + j as usize) } else { (t + j.unsigned_abs(), t) };
                out[i * n + k] = *v;
            }
        }
        out
    }

    pub fn transpose(&self) -> BandedMatrix {
        let diags = (-(self.upper as isize)..=self.lower as isize).map(|j| self.diagonal(-j).to_vec()).collect();
        BandedMatrix { n: self.n, lower: self.upper, upper: self.lower, diags }
    }

    /// Principal block on rows/columns `start .. start + size` (0-based).
    pub fn principal_block(&self, start: usize, size: usize) -> BandedMatrix {
        assert!(start + size <= self.n, "block exceeds matrix");
        let diags = (-(self.lower as isize)..=self.upper as isize)
            .map(|j| {
                let len = size.saturating_sub(j.unsigned_abs());
                self.diagonal(j)[start..start + len].to_vec()
            })
            .collect();
        BandedMatrix { n: size, lower: self.lower, upper: self.upper, diags }
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal(0).iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.diags.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn add_scaled(&mut self, other: &BandedMatrix, scale: f64) {
        debug_assert_eq!((self.n, self.lower, self.upper), (other.n, other.lower, other.upper));
        for (a, b) in self.diags.iter_mut().zip(&other.diags) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y * scale;
            }
        }
    }
}

/// Noise distributions for the structured perturbation. All presets have mean zero
/// (with the default binomial centring).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseDist {
    /// `Binomial(trials, 1/2) - center`.
    PaperBinomial {
        trials: u64,
        center: f64,
    },
    StandardNormal,
    Rademacher,
    /// Uniform on `[-half_width, half_width]`.
    UniformSym {
        half_width: f64,
    },
}

impl NoiseDist {
    pub const PAPER_BINOMIAL: NoiseDist = NoiseDist::PaperBinomial { trials: 512, center: 256.0 };

    pub fn tag(&self) -> &'static str {
        match self {
            NoiseDist::PaperBinomial { .. } => "paper-binomial",
            NoiseDist::StandardNormal => "standard-normal",
            NoiseDist::Rademacher => "rademacher",
            NoiseDist::UniformSym { .. } => "uniform-sym",
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            NoiseDist::PaperBinomial { trials, center } => trials as f64 / 2.0 - center,
            _ => 0.0,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            NoiseDist::PaperBinomial { trials, .. } => trials as f64 / 4.0,
            NoiseDist::StandardNormal | NoiseDist::Rademacher => 1.0,
            NoiseDist::UniformSym { half_width } => half_width * half_width / 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub dist: NoiseDist,
    /// Complex noise draws real and imaginary parts independently, each scaled by `1/sqrt 2`
    /// so the total variance matches the real case.
    pub complex: bool,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec { dist: NoiseDist::PAPER_BINOMIAL, complex: false }
    }
}

impl NoiseSpec {
    pub fn real(dist: NoiseDist) -> Self {
        NoiseSpec { dist, complex: false }
    }

    fn draw_real<R: Rng + ?Sized>(&self, sampler: &Sampler, rng: &mut R) -> f64 {
        match (self.dist, sampler) {
            (NoiseDist::PaperBinomial { center, .. }, Sampler::Binomial(b)) => b.sample(rng) as f64 - center,
            (NoiseDist::StandardNormal, _) => StandardNormal.sample(rng),
            (NoiseDist::Rademacher, _) => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            (NoiseDist::UniformSym { half_width }, _) => rng.random_range(-half_width..=half_width),
            _ => unreachable!("sampler built from the same distribution"),
        }
    }

    /// Fills `out` with i.i.d. draws.
    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [Complex64]) -> Result<()> {
        let sampler = Sampler::new(&self.dist)?;
        for v in out.iter_mut() {
            *v = if self.complex {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                Complex64::new(self.draw_real(&sampler, rng) * s, self.draw_real(&sampler, rng) * s)
            } else {
                Complex64::new(self.draw_real(&sampler, rng), 0.0)
            };
        }
        Ok(())
    }
}

enum Sampler {
    Binomial(Binomial),
    Other,
}

impl Sampler {
    fn new(dist: &NoiseDist) -> Result<Sampler> {
        match *dist {
            NoiseDist::PaperBinomial { trials, .. } => Binomial::new(trials, 0.5)
                .map(Sampler::Binomial)
                .map_err(|e| Error::InvalidArgument(format!("binomial noise: {e}"))),
            NoiseDist::UniformSym { half_width } if !(half_width.is_finite() && half_width > 0.0) => {
                Err(Error::InvalidArgument("uniform noise needs a positive half-width".into()))
            }
            _ => Ok(Sampler::Other),
        }
    }
}

/// Perturbation scale: a fixed number or `1/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sigma {
    Value(f64),
    InverseN,
}

impl Sigma {
    pub fn resolve(&self, n: usize) -> f64 {
        match *self {
            Sigma::Value(v) => v,
            Sigma::InverseN => 1.0 / n as f64,
        }
    }
}

impl std::str::FromStr for Sigma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1/n" {
            return Ok(Sigma::InverseN);
        }
        let v: f64 = s.parse().map_err(|_| Error::InvalidArgument(format!("bad sigma `{s}`")))?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidArgument(format!("sigma must be finite and >= 0, got {v}")));
        }
        Ok(Sigma::Value(v))
    }
}

impl std::fmt::Display for Sigma {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sigma::Value(v) => write!(f, "{v}"),
            Sigma::InverseN => f.write_str("1/n"),
        }
    }
}

/// Sorted uniform sample `x_{1,n} <= ... <= x_{n,n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPoints {
    pub points: Vec<f64>,
    pub seed: u64,
}

fn build_with<F>(sym: &LaurentSymbol, n: usize, mut sample_at: F) -> Result<BandedMatrix>
where
    F: FnMut(usize) -> f64,
{
    if n == 0 {
        return Err(Error::InvalidArgument("matrix dimension must be >= 1".into()));
    }
    let lower = sym.lower().min(n - 1);
    let upper = sym.upper().min(n - 1);
    let mut m = BandedMatrix::zeros(n, lower, upper);
    let xs: Vec<f64> = (0..n).map(&mut sample_at).collect();
    for j in -(lower as isize)..=upper as isize {
        let expr = match sym.coefficient_expr(j as i32) {
            Some(e) => e,
            None => continue,
        };
        for (t, v) in m.diagonal_mut(j).iter_mut().enumerate() {
            *v = expr.eval(xs[t])?;
        }
    }
    Ok(m)
}

/// Twisted Toeplitz matrix `T_n(a)`: entry `(i, k) = a_{k-i}(min(i, k) / n)`.
pub fn build_twisted(sym: &LaurentSymbol, n: usize) -> Result<BandedMatrix> {
    build_with(sym, n, |t| (t + 1) as f64 / n as f64)
}

/// `T_n(a) + sigma X_n` with i.i.d. noise on every stored diagonal.
pub fn build_perturbed(
    sym: &LaurentSymbol,
    n: usize,
    sigma: f64,
    noise: &NoiseSpec,
    seed: u64,
) -> Result<BandedMatrix> {
    let mut m = build_twisted(sym, n)?;
    if sigma == 0.0 {
        return Ok(m);
    }
    let noise_matrix = noise_matrix(n, m.lower, m.upper, noise, seed)?;
    m.add_scaled(&noise_matrix, sigma);
    Ok(m)
}

/// The banded noise matrix `X_n`, diagonal by diagonal from offset `-lower` upwards.
pub fn noise_matrix(n: usize, lower: usize, upper: usize, noise: &NoiseSpec, seed: u64) -> Result<BandedMatrix> {
    let mut x = BandedMatrix::zeros(n, lower, upper);
    let mut rng = rng::stream(seed, Purpose::Noise);
    for diag in x.diags.iter_mut() {
        noise.fill(&mut rng, diag)?;
    }
    Ok(x)
}

pub fn sample_order_statistics(n: usize, seed: u64) -> SamplingPoints {
    let mut rng = rng::stream(seed, Purpose::SamplingPoints);
    let mut points: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    points.sort_by(f64::total_cmp);
    SamplingPoints { points, seed }
}

/// Randomised twisted Toeplitz matrix: `i/n` replaced by the order statistics `x_{i,n}`.
pub fn build_randomized(sym: &LaurentSymbol, n: usize, seed: u64) -> Result<BandedMatrix> {
    let xs = sample_order_statistics(n, seed);
    build_randomized_at(sym, &xs)
}

pub fn build_randomized_at(sym: &LaurentSymbol, xs: &SamplingPoints) -> Result<BandedMatrix> {
    build_with(sym, xs.points.len(), |t| xs.points[t])
}

/// Block size `floor(sqrt n)` used for frozen-block experiments with `sigma_n = 1/n`.
pub fn frozen_block_size(n: usize) -> usize {
    ((n as f64).sqrt().floor() as usize).max(1)
}
