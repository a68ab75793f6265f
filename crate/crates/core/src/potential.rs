//! Continuant recurrences, transfer-matrix growth diagnostics and logarithmic potentials
//! of tridiagonal twisted Toeplitz matrices.
//!
//! For a frozen symbol `d z^-1 + b + c z` the quadratic `c t^2 + (b - z) t + d = 0` has roots
//! `xi1, xi2`, always labelled so that `|xi1| >= |xi2|`. The frozen potential is
//! `gamma(z) = log|c| + log|xi1|`, which is also the logarithmic potential of the arcsine
//! measure on `[b - 2 sqrt(dc), b + 2 sqrt(dc)]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::BandedMatrix;
use crate::symbol::{ComplexInterval, TridiagonalSymbol};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Default node count for [`integrated_gamma`].
pub const DEFAULT_QUADRATURE_NODES: usize = 401;
/// Grid size over `x` used to screen `z` against the exceptional set.
pub const SCREEN_GRID: usize = 401;
/// Minimum admissible value of both screening quantities.
pub const SCREEN_TOLERANCE: f64 = 1e-3;

/// Constant tridiagonal symbol `d z^-1 + b + c z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrozenSymbol {
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl FrozenSymbol {
    pub fn new(b: Complex64, c: Complex64, d: Complex64) -> Self {
        FrozenSymbol { b, c, d }
    }

    pub fn is_degenerate(&self) -> bool {
        self.c == ZERO || self.d == ZERO
    }

    /// Roots `(xi1, xi2)` of `c t^2 + (b - z) t + d` with `|xi1| >= |xi2|`; `None` when `c = 0`.
    pub fn roots(&self, z: Complex64) -> Option<(Complex64, Complex64)> {
        if self.c == ZERO {
            return None;
        }
        let lin = self.b - z;
        let disc = (lin * lin - 4.0 * self.c * self.d).sqrt();
        let plus = lin + disc;
        let minus = lin - disc;
        let big = if plus.norm() >= minus.norm() { plus } else { minus };
        if big == ZERO {
            return Some((ZERO, ZERO));
        }
        let q = -big * 0.5;
        let r1 = q / self.c;
        let r2 = self.d / q;
        Some(if r1.norm() >= r2.norm() { (r1, r2) } else { (r2, r1) })
    }

    /// `log|c| + log max(|xi1|, |xi2|)`, or `log|z - b|` when `c d = 0`.
    pub fn gamma(&self, z: Complex64) -> f64 {
        if self.is_degenerate() {
            return (z - self.b).norm().ln();
        }
        let (xi1, _) = self.roots(z).expect("c is non-zero");
        self.c.norm().ln() + xi1.norm().ln()
    }

    /// Segment `b +- 2 sqrt(d c)` carrying the arcsine limit measure.
    pub fn interval(&self) -> ComplexInterval {
        ComplexInterval { center: self.b, half_width: 2.0 * (self.d * self.c).sqrt() }
    }

    /// Transfer matrix `[[(z - b)/c, -d/c], [1, 0]]` of the constant recurrence.
    fn transfer(&self, z: Complex64) -> [[Complex64; 2]; 2] {
        [[(z - self.b) / self.c, -self.d / self.c], [ONE, ZERO]]
    }
}

/// [`FrozenSymbol::gamma`] as a free function.
pub fn frozen_gamma(f: &FrozenSymbol, z: Complex64) -> f64 {
    f.gamma(z)
}

/// `gamma(x, z)`: the frozen potential of `sym` at `x`.
pub fn gamma_field(sym: &TridiagonalSymbol, x: f64, z: Complex64) -> Result<f64> {
    Ok(sym.frozen(x)?.gamma(z))
}

/// Composite Simpson rule for `int_0^1 gamma(t, z) dt` on `nodes` equispaced nodes. An even
/// node count closes with the 3/8 rule on the last three intervals; two nodes use the
/// trapezoid rule.
pub fn integrated_gamma(sym: &TridiagonalSymbol, z: Complex64, nodes: usize) -> Result<f64> {
    if nodes < 2 {
        return Err(Error::InvalidArgument("quadrature needs at least 2 nodes".into()));
    }
    let intervals = nodes - 1;
    let h = 1.0 / intervals as f64;
    let values: Vec<f64> =
        (0..nodes).map(|i| gamma_field(sym, i as f64 / intervals as f64, z)).collect::<Result<_>>()?;
    if intervals == 1 {
        return Ok(0.5 * h * (values[0] + values[1]));
    }
    let simpson_end = if intervals.is_multiple_of(2) { intervals } else { intervals - 3 };
    let mut total = 0.0;
    for i in (0..simpson_end).step_by(2) {
        total += h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
    }
    if simpson_end < intervals {
        let i = simpson_end;
        total += 3.0 * h / 8.0 * (values[i] + 3.0 * values[i + 1] + 3.0 * values[i + 2] + values[i + 3]);
    }
    Ok(total)
}

/// Complex number stored as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl ScaledComplex {
    /// `log|value|`, `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.mantissa == ZERO {
            f64::NEG_INFINITY
        } else {
            self.mantissa.norm().ln() + self.log_scale
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == ZERO
    }
}

/// Rescaled run of the continuant recurrence `D_k = (z - b_k) D_{k-1} - d_{k-1} c_{k-1} D_{k-2}`
/// for `D_k = det(z I - M_k)` on the leading `k x k` blocks. The true pair is
/// `(D_k, D_{k-1}) = exp(log_scale[k]) * states[k]`, and every stored state has max-norm 1
/// unless both entries vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuantTrace {
    pub states: Vec<(Complex64, Complex64)>,
    pub log_scale: Vec<f64>,
}

impl ContinuantTrace {
    /// Number of recurrence steps (the matrix dimension).
    pub fn len(&self) -> usize {
        self.states.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `D_k` for `0 <= k <= len`.
    pub fn det(&self, k: usize) -> ScaledComplex {
        ScaledComplex { mantissa: self.states[k].0, log_scale: self.log_scale[k] }
    }

    pub fn log_abs_det(&self) -> f64 {
        self.det(self.len()).ln_abs()
    }

    /// `|D_k| / |D_{k-1}|` for `k = 1..=len` (infinite or NaN once a zero appears).
    pub fn growth_ratios(&self) -> Vec<f64> {
        (1..=self.len()).map(|k| (self.det(k).ln_abs() - self.det(k - 1).ln_abs()).exp()).collect()
    }
}

fn require_tridiagonal(m: &BandedMatrix) -> Result<()> {
    if m.lower() > 1 || m.upper() > 1 {
        return Err(Error::NotTridiagonal { lower: m.lower(), upper: m.upper() });
    }
    Ok(())
}

/// Diagonal, superdiagonal and subdiagonal entries (zeros for a missing band).
fn bands(m: &BandedMatrix) -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
    let n = m.n();
    let get = |off: isize, len: usize| -> Vec<Complex64> {
        if (off > 0 && m.upper() == 0) || (off < 0 && m.lower() == 0) {
            vec![ZERO; len]
        } else {
            m.diagonal(off).to_vec()
        }
    };
    let off_len = n.saturating_sub(1);
    (m.diagonal(0).to_vec(), get(1, off_len), get(-1, off_len))
}

fn continuant_steps<F>(m: &BandedMatrix, z: Complex64, mut visit: F) -> Result<()>
where
    F: FnMut(Complex64, Complex64, f64),
{
    require_tridiagonal(m)?;
    let (diag, upper, lower) = bands(m);
    let (mut cur, mut prev, mut scale) = (ONE, ZERO, 0.0f64);
    visit(cur, prev, scale);
    for k in 0..diag.len() {
        let coupling = if k == 0 { ZERO } else { upper[k - 1] * lower[k - 1] };
        let next = (z - diag[k]) * cur - coupling * prev;
        prev = cur;
        cur = next;
        let norm = cur.norm().max(prev.norm());
        if norm > 0.0 && norm.is_finite() {
            cur /= norm;
            prev /= norm;
            scale += norm.ln();
        }
        visit(cur, prev, scale);
    }
    Ok(())
}

/// Full trace of the rescaled continuant recurrence of a tridiagonal matrix.
pub fn continuant_trace(m: &BandedMatrix, z: Complex64) -> Result<ContinuantTrace> {
    let mut states = Vec::with_capacity(m.n() + 1);
    let mut log_scale = Vec::with_capacity(m.n() + 1);
    continuant_steps(m, z, |u, v, s| {
        states.push((u, v));
        log_scale.push(s);
    })?;
    Ok(ContinuantTrace { states, log_scale })
}

/// `D_n` and `D_{n-1}` of a tridiagonal matrix in scaled form, in O(n) without storing the trace.
pub fn continuant_det(m: &BandedMatrix, z: Complex64) -> Result<(ScaledComplex, ScaledComplex)> {
    let mut last = (ONE, ZERO, 0.0);
    continuant_steps(m, z, |u, v, s| last = (u, v, s))?;
    Ok((ScaledComplex { mantissa: last.0, log_scale: last.2 }, ScaledComplex { mantissa: last.1, log_scale: last.2 }))
}

/// `log|det(M - z I)|` for tridiagonal `M` in O(n).
pub fn continuant_log_det(m: &BandedMatrix, z: Complex64) -> Result<f64> {
    Ok(continuant_det(m, z)?.0.ln_abs())
}

/// Outcome of the conjugated transfer recurrence `Y_k = B_k Y_{k-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeReport {
    /// `|xi1(z)|`.
    pub rho: f64,
    /// `|xi2(z)|`.
    pub eta: f64,
    /// Largest entry modulus over all perturbation matrices `E_k`.
    pub delta_hat: f64,
    /// `|u_k| / |u_{k-1}|` for `k = 1..=n`.
    pub ratios: Vec<f64>,
    /// First step with `|v_k| > |u_k|`, if any.
    pub cone_exit: Option<usize>,
    /// First step whose ratio leaves `[rho - 2 delta_hat, rho + 2 delta_hat]`, if any.
    pub ratio_violation: Option<usize>,
}

impl ConeReport {
    /// Whether `delta_hat < min(rho / 4, (rho - eta) / 4)`.
    pub fn hypothesis_holds(&self) -> bool {
        self.delta_hat < (self.rho / 4.0).min((self.rho - self.eta) / 4.0)
    }

    pub fn cone_preserved(&self) -> bool {
        self.cone_exit.is_none()
    }

    pub fn ratios_within_bounds(&self) -> bool {
        self.ratio_violation.is_none()
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.rho - 2.0 * self.delta_hat, self.rho + 2.0 * self.delta_hat)
    }
}

/// Runs the transfer recurrence of a tridiagonal `M` (normalised by the superdiagonal, with
/// the reference symbol `f` closing the last step) in the eigenbasis of the constant transfer
/// matrix of `f`, starting from `S^{-1} (1, 0)`.
pub fn cone_diagnostics(m: &BandedMatrix, f: &FrozenSymbol, z: Complex64) -> Result<ConeReport> {
    require_tridiagonal(m)?;
    let (xi1, xi2) = f.roots(z).ok_or_else(|| Error::InvalidArgument("reference symbol needs c != 0".into()))?;
    if xi1.norm() == xi2.norm() {
        return Err(Error::ExceptionalPoint(z));
    }
    let n = m.n();
    let (diag, upper, lower) = bands(m);
    let base = f.transfer(z);
    let gap = xi1 - xi2;
    // S = [[xi1, xi2], [1, 1]], S^{-1} = [[1, -xi2], [-1, xi1]] / gap.
    let conj = |a: [[Complex64; 2]; 2]| -> [[Complex64; 2]; 2] {
        let s = [[xi1, xi2], [ONE, ONE]];
        let si = [[ONE / gap, -xi2 / gap], [-ONE / gap, xi1 / gap]];
        let mut as_ = [[ZERO; 2]; 2];
        for i in 0..2 {
            for k in 0..2 {
                as_[i][k] = a[i][0] * s[0][k] + a[i][1] * s[1][k];
            }
        }
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for k in 0..2 {
                out[i][k] = si[i][0] * as_[0][k] + si[i][1] * as_[1][k];
            }
        }
        out
    };

    let rho = xi1.norm();
    let eta = xi2.norm();
    let mut u = ONE / gap;
    let mut v = -ONE / gap;
    let mut delta_hat = 0.0f64;
    let mut ratios = Vec::with_capacity(n);
    let mut cone_flags = Vec::with_capacity(n);
    for k in 0..n {
        let c_k = if k + 1 < n { upper[k] } else { f.c };
        let d_prev = if k == 0 { f.d } else { lower[k - 1] };
        if c_k == ZERO {
            return Err(Error::InvalidArgument(format!("zero superdiagonal entry at step {}", k + 1)));
        }
        let a_k = [[(z - diag[k]) / c_k, -d_prev / c_k], [ONE, ZERO]];
        let diff = [[a_k[0][0] - base[0][0], a_k[0][1] - base[0][1]], [ZERO, ZERO]];
        let e_k = conj(diff);
        delta_hat = delta_hat.max(e_k.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max));
        let lambda = [[xi1 + e_k[0][0], e_k[0][1]], [e_k[1][0], xi2 + e_k[1][1]]];
        let nu = lambda[0][0] * u + lambda[0][1] * v;
        let nv = lambda[1][0] * u + lambda[1][1] * v;
        ratios.push(nu.norm() / u.norm());
        cone_flags.push(nv.norm() <= nu.norm());
        let scale = nu.norm().max(nv.norm());
        if scale > 0.0 {
            u = nu / scale;
            v = nv / scale;
        } else {
            u = nu;
            v = nv;
        }
    }
    let (lo, hi) = (rho - 2.0 * delta_hat, rho + 2.0 * delta_hat);
    // Relative slack absorbs rounding in the unperturbed case where the bounds are tight.
    let slack = 64.0 * f64::EPSILON * rho.max(1.0);
    let ratio_violation = ratios.iter().position(|r| *r < lo - slack || *r > hi + slack).map(|k| k + 1);
    let cone_exit = cone_flags.iter().position(|ok| !ok).map(|k| k + 1);
    Ok(ConeReport { rho, eta, delta_hat, ratios, cone_exit, ratio_violation })
}

/// Screening distances of `z` from the exceptional set over the `x`-grid:
/// `(min_x ||xi1| - |xi2||, min_x |xi1^2 - 1|)`.
pub fn screening_distances(sym: &TridiagonalSymbol, z: Complex64) -> Result<(f64, f64)> {
    let mut gap = f64::INFINITY;
    let mut unit = f64::INFINITY;
    for r in 0..SCREEN_GRID {
        let f = sym.frozen(r as f64 / (SCREEN_GRID - 1) as f64)?;
        let (xi1, xi2) = f.roots(z).ok_or_else(|| Error::InvalidArgument("symbol has c(x) = 0".into()))?;
        gap = gap.min(xi1.norm() - xi2.norm());
        unit = unit.min((xi1 * xi1 - 1.0).norm());
    }
    Ok((gap, unit))
}

/// Whether `z` passes the exceptional-set screening.
pub fn is_screened(sym: &TridiagonalSymbol, z: Complex64) -> Result<bool> {
    let (gap, unit) = screening_distances(sym, z)?;
    Ok(gap > SCREEN_TOLERANCE && unit > SCREEN_TOLERANCE)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaResult {
    pub theta: Complex64,
    /// `xi1(jk/n, z)^-2`.
    pub predicted: Complex64,
}

impl ThetaResult {
    pub fn error(&self) -> f64 {
        (self.theta - self.predicted).norm()
    }
}

/// Coupling ratio between neighbouring `k x k` diagonal blocks `j` and `j + 1` (1-based, block
/// `j` covering rows `(j-1)k .. jk`):
/// `c d * det(B_j' - z) det(B_{j+1}'' - z) / (det(B_j - z) det(B_{j+1} - z))`, where `B_j'`
/// drops the last row and column of block `j`, `B_{j+1}''` drops the first of block `j + 1`,
/// and `c d` is the symbol product at `x = jk/n`.
pub fn theta_ratio(sym: &TridiagonalSymbol, m: &BandedMatrix, k: usize, j: usize, z: Complex64) -> Result<ThetaResult> {
    require_tridiagonal(m)?;
    let n = m.n();
    if k < 2 || j < 1 || (j + 1) * k > n {
        return Err(Error::InvalidArgument(format!("need k >= 2 and 1 <= j <= n/k - 1 (n = {n}, k = {k}, j = {j})")));
    }
    if !is_screened(sym, z)? {
        return Err(Error::ExceptionalPoint(z));
    }
    let x = (j * k) as f64 / n as f64;
    let f = sym.frozen(x)?;
    let (xi1, _) = f.roots(z).expect("screening requires c != 0");

    let first = m.principal_block((j - 1) * k, k);
    let second = m.principal_block(j * k, k);
    let second_tail = m.principal_block(j * k + 1, k - 1);
    // Signs (-1)^k of det(M - z) versus det(z - M) cancel between numerator and denominator.
    let (first_full, first_lead) = continuant_det(&first, z)?;
    let (second_full, _) = continuant_det(&second, z)?;
    let (tail_full, _) = continuant_det(&second_tail, z)?;
    if first_full.is_zero() || second_full.is_zero() {
        return Err(Error::SingularBlock(z));
    }
    let mantissa = f.c * f.d * first_lead.mantissa * tail_full.mantissa / (first_full.mantissa * second_full.mantissa);
    let log_scale = first_lead.log_scale + tail_full.log_scale - first_full.log_scale - second_full.log_scale;
    Ok(ThetaResult { theta: mantissa * log_scale.exp(), predicted: ONE / (xi1 * xi1) })
}
