//! Complex non-Hermitian eigenvalues (balancing, Householder Hessenberg reduction,
//! single-shift QR), banded log-determinants, and the two-block determinant identity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::BandedMatrix;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Square row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        DenseMatrix { n, data: rows.concat() }
    }

    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n * n);
        DenseMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                t[(k, i)] = self[(i, k)];
            }
        }
        t
    }

    /// Submatrix on rows/columns `range`.
    pub fn principal(&self, range: std::ops::Range<usize>) -> DenseMatrix {
        let m = range.len();
        let mut out = DenseMatrix::zeros(m);
        for (a, i) in range.clone().enumerate() {
            for (b, k) in range.clone().enumerate() {
                out[(a, b)] = self[(i, k)];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl From<&BandedMatrix> for DenseMatrix {
    fn from(m: &BandedMatrix) -> Self {
        DenseMatrix { n: m.n(), data: m.to_dense() }
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, k): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + k]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, k): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + k]
    }
}

/// Dense matrix with zeros below the first subdiagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct HessenbergMatrix(DenseMatrix);

impl HessenbergMatrix {
    pub fn as_dense(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.0
    }
}

/// Unitary reduction to upper Hessenberg form. Inputs with at most one subdiagonal are
/// already Hessenberg and are returned as they are.
pub fn hessenberg_reduce(m: &BandedMatrix) -> HessenbergMatrix {
    let dense = DenseMatrix::from(m);
    if m.lower() <= 1 {
        return HessenbergMatrix(dense);
    }
    hessenberg_reduce_dense(dense)
}

pub fn hessenberg_reduce_dense(mut a: DenseMatrix) -> HessenbergMatrix {
    let n = a.n;
    let mut v = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let col_norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let tail_norm = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>();
        if tail_norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * col_norm;
        // v = x - alpha e1, normalised so that H = I - 2 v v^H.
        for (t, i) in (k + 1..n).enumerate() {
            v[t] = a[(i, k)];
        }
        v[0] -= alpha;
        let vnorm = v[..len].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in &mut v[..len] {
            *c /= vnorm;
        }
        // Left: rows k+1.., columns k...
        for col in k..n {
            let mut w = ZERO;
            for t in 0..len {
                w += v[t].conj() * a[(k + 1 + t, col)];
            }
            w *= 2.0;
            for t in 0..len {
                let upd = v[t] * w;
                a[(k + 1 + t, col)] -= upd;
            }
        }
        // Right: all rows, columns k+1...
        for row in 0..n {
            let base = row * n + k + 1;
            let row_part = &mut a.data[base..base + len];
            let w = 2.0 * row_part.iter().zip(&v[..len]).map(|(x, y)| x * y).sum::<Complex64>();
            for (x, y) in row_part.iter_mut().zip(&v[..len]) {
                *x -= w * y.conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
    HessenbergMatrix(a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Diagonal similarity scaling before the QR iteration.
    pub balance: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { balance: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    pub converged: Vec<bool>,
    /// Total QR sweeps performed.
    pub iterations: usize,
}

impl Spectrum {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|c| *c)
    }

    pub fn unconverged(&self) -> usize {
        self.converged.iter().filter(|c| !**c).count()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Ok(self)` when every eigenvalue converged.
    pub fn require_converged(self) -> Result<Spectrum> {
        if self.all_converged() {
            Ok(self)
        } else {
            Err(Error::NoConvergence { unconverged: self.unconverged(), n: self.len() })
        }
    }
}

pub fn eigenvalues(m: &BandedMatrix) -> Spectrum {
    eigenvalues_with(m, EigenOptions::default())
}

pub fn eigenvalues_with(m: &BandedMatrix, opts: EigenOptions) -> Spectrum {
    let dense = if opts.balance { area_scaling(m) } else { DenseMatrix::from(m) };
    eigenvalues_dense(dense, opts)
}

pub fn eigenvalues_dense(mut a: DenseMatrix, opts: EigenOptions) -> Spectrum {
    if opts.balance {
        osborne_balance(&mut a, 64);
    }
    let is_hessenberg = (0..a.n).all(|i| (0..i.saturating_sub(1)).all(|k| a[(i, k)] == ZERO));
    let mut h = if is_hessenberg { a } else { hessenberg_reduce_dense(a).into_dense() };
    hessenberg_qr(&mut h)
}

/// Radius `rho` at which the closed curve `sum_j a_j rho^j e^{ijt}` encloses zero signed
/// area, i.e. the root of the increasing function `sum_j j |a_j|^2 rho^{2j}`. `None` when the
/// coefficients do not straddle `j = 0`.
fn zero_area_radius(coeffs: &[(isize, f64)]) -> Option<f64> {
    let has_up = coeffs.iter().any(|&(j, w)| j > 0 && w > 0.0);
    let has_down = coeffs.iter().any(|&(j, w)| j < 0 && w > 0.0);
    if !(has_up && has_down) {
        return None;
    }
    let area = |u: f64| coeffs.iter().map(|&(j, w)| j as f64 * w * w * (2.0 * j as f64 * u).exp()).sum::<f64>();
    let (mut lo, mut hi) = (-30.0f64, 30.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if area(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((0.5 * (lo + hi)).exp())
}

/// Dense copy of `D M D^{-1}` with `D = diag(s_t)` built from per-link ratios
/// `s_{t+1} / s_t = 1 / rho_t`, where `rho_t` is the zero-area radius of the local row symbol.
/// For a tridiagonal pair this equalises `|upper_t|` and `|lower_t|`; links with nothing to
/// balance keep ratio 1.
fn area_scaling(m: &BandedMatrix) -> DenseMatrix {
    let n = m.n();
    let (q, p) = (m.lower(), m.upper());
    let ratios: Vec<f64> = (0..n.saturating_sub(1))
        .map(|t| {
            let row_coeffs: Vec<(isize, f64)> = if m.is_tridiagonal() {
                vec![(1, m.get(t, t + 1).norm()), (-1, m.get(t + 1, t).norm())]
            } else {
                let row = if n > p + q { t.clamp(q, n - 1 - p) } else { t };
                (-(q as isize)..=p as isize)
                    .filter(|&j| j != 0)
                    .filter_map(|j| {
                        let col = row as isize + j;
                        (0..n as isize).contains(&col).then(|| (j, m.get(row, col as usize).norm()))
                    })
                    .collect()
            };
            zero_area_radius(&row_coeffs).map_or(1.0, |rho| 1.0 / rho)
        })
        .collect();
    let mut out = DenseMatrix::zeros(n);
    for j in -(q as isize)..=p as isize {
        for (t, v) in m.diagonal(j).iter().enumerate() {
            let span = j.unsigned_abs();
            // s_row / s_col for the entry at (t, t + span) or (t + span, t).
            let prod: f64 = ratios[t..t + span].iter().product();
            if j >= 0 {
                out[(t, t + span)] = v / prod;
            } else {
                out[(t + span, t)] = v * prod;
            }
        }
    }
    out
}

/// Osborne-style diagonal balancing with power-of-two factors (exact in floating point).
fn osborne_balance(a: &mut DenseMatrix, max_sweeps: usize) {
    let n = a.n;
    const RADIX: f64 = 2.0;
    for _ in 0..max_sweeps {
        let mut changed = false;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for k in 0..n {
                if k != i {
                    c += a[(k, i)].norm();
                    r += a[(i, k)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            let mut rr = r;
            while cc < rr / RADIX {
                cc *= RADIX;
                rr /= RADIX;
                f *= RADIX;
            }
            while cc >= rr * RADIX {
                cc /= RADIX;
                rr *= RADIX;
                f /= RADIX;
            }
            if cc + rr < 0.95 * s {
                changed = true;
                for k in 0..n {
                    a[(i, k)] /= f;
                    a[(k, i)] *= f;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

#[inline]
fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Eigenvalues of an upper Hessenberg matrix by complex single-shift QR with Wilkinson
/// shifts, an exceptional shift after every 10 sweeps without deflation, and a hard cap of
/// `30 n` sweeps. The matrix is overwritten.
fn hessenberg_qr(h: &mut DenseMatrix) -> Spectrum {
    let n = h.n;
    let mut values = vec![ZERO; n];
    let mut converged = vec![false; n];
    if n == 0 {
        return Spectrum { values, converged, iterations: 0 };
    }
    let eps = f64::EPSILON;
    let norm_floor = h.max_abs() * eps;
    let cap = 30 * n;
    let mut total = 0usize;
    let mut stalled = 0usize;
    let mut hi = n - 1;
    let data = &mut h.data;
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    let at = |i: usize, k: usize| i * n + k;

    loop {
        // Locate the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = data[at(lo, lo - 1)].norm();
            let diag = data[at(lo - 1, lo - 1)].norm() + data[at(lo, lo)].norm();
            if sub <= eps * diag || sub <= norm_floor {
                data[at(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            values[hi] = data[at(hi, hi)];
            converged[hi] = true;
            stalled = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        if total >= cap {
            for i in 0..=hi {
                values[i] = data[at(i, i)];
            }
            break;
        }
        total += 1;
        stalled += 1;

        let d = data[at(hi, hi)];
        let shift = if stalled.is_multiple_of(10) {
            d + Complex64::new(0.75 * data[at(hi, hi - 1)].re.abs() + 0.75 * data[at(hi, hi - 1)].im.abs(), 0.0)
        } else {
            let a = data[at(hi - 1, hi - 1)];
            let b = data[at(hi - 1, hi)];
            let c = data[at(hi, hi - 1)];
            let half = (a - d) * 0.5;
            let bc = b * c;
            let disc = (half * half + bc).sqrt();
            let den = if abs1(half + disc) >= abs1(half - disc) { half + disc } else { half - disc };
            if den == ZERO {
                d
            } else {
                d - bc / den
            }
        };

        // Implicit single-shift sweep on rows/columns lo..=hi via Givens rotations. Column
        // rotation k is applied at once only to rows k+1 and k+2, which feed the next rotation;
        // rows lo..=k are not read again during the sweep and receive their column rotations
        // afterwards in one contiguous pass per row.
        rotations.clear();
        let mut x = data[at(lo, lo)] - shift;
        let mut y = data[at(lo + 1, lo)];
        for k in lo..hi {
            if k > lo {
                x = data[at(k, k - 1)];
                y = data[at(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let sc = s.conj();
            rotations.push((c, s));
            let first = if k > lo { k - 1 } else { lo };
            {
                let (row_k, row_k1) = data.split_at_mut(at(k + 1, 0));
                let row_k = &mut row_k[at(k, first)..at(k, hi + 1)];
                let row_k1 = &mut row_k1[first..=hi];
                for (a, b) in row_k.iter_mut().zip(row_k1.iter_mut()) {
                    let (va, vb) = (*a, *b);
                    *a = va * c + s * vb;
                    *b = vb * c - sc * va;
                }
            }
            if k > lo {
                data[at(k + 1, k - 1)] = ZERO;
            }
            for row in k + 1..=(k + 2).min(hi) {
                let idx = at(row, k);
                let (a, b) = (data[idx], data[idx + 1]);
                data[idx] = a * c + b * sc;
                data[idx + 1] = b * c - a * s;
            }
        }
        // Rows are processed in blocks so that independent rotation chains interleave.
        const BLOCK: usize = 8;
        let mut block_start = lo;
        while block_start <= hi {
            let block_end = (block_start + BLOCK - 1).min(hi);
            for k in block_start..hi {
                let (c, s) = rotations[k - lo];
                let sc = s.conj();
                for row in block_start..=block_end.min(k) {
                    let idx = at(row, k);
                    let (a, b) = (data[idx], data[idx + 1]);
                    data[idx] = a * c + b * sc;
                    data[idx + 1] = b * c - a * s;
                }
            }
            block_start = block_end + 1;
        }
    }

    Spectrum { values, converged, iterations: total }
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c` mapping `(x, y)` to `(r, 0)`.
#[inline]
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    if y == ZERO {
        return (1.0, ZERO);
    }
    if x == ZERO {
        return (0.0, y.conj() / y.norm());
    }
    let ax = x.norm();
    let norm = ax.hypot(y.norm());
    (ax / norm, (x / ax) * y.conj() / norm)
}

/// Roots of `sum_k coeffs[k] z^k` via companion-matrix eigenvalues.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = coeffs.len().checked_sub(1).ok_or_else(|| Error::InvalidArgument("empty polynomial".into()))?;
    let lead = coeffs[degree];
    if lead == ZERO {
        return Err(Error::InvalidArgument("leading coefficient is zero".into()));
    }
    if degree == 0 {
        return Ok(Vec::new());
    }
    let mut comp = DenseMatrix::zeros(degree);
    for k in 0..degree {
        comp[(0, k)] = -coeffs[degree - 1 - k] / lead;
    }
    for i in 1..degree {
        comp[(i, i - 1)] = ONE;
    }
    eigenvalues_dense(comp, EigenOptions::default()).require_converged().map(|s| s.values)
}

/// `log |det(M - z I)|` by banded LU with partial pivoting; `-inf` on an exactly zero pivot.
pub fn log_abs_det(m: &BandedMatrix, z: Complex64) -> f64 {
    let n = m.n();
    let kl = m.lower();
    let ku = m.upper();
    let width = 2 * kl + ku + 1;
    // Row i holds columns i - kl ..= i + ku + kl at offsets 0..width.
    let mut band = vec![ZERO; n * width];
    let idx = |i: usize, col: usize| i * width + (col + kl - i);
    for j in -(kl as isize)..=ku as isize {
        for (t, v) in m.diagonal(j).iter().enumerate() {
            let (i, k) = if j >= 0 { (t, t + j as usize) } else { (t + j.unsigned_abs(), t) };
            band[idx(i, k)] = *v;
        }
    }
    for i in 0..n {
        band[idx(i, i)] -= z;
    }
    let mut log_det = 0.0;
    for k in 0..n {
        let last_row = (k + kl).min(n - 1);
        let last_col = (k + ku + kl).min(n - 1);
        let mut piv = k;
        let mut best = band[idx(k, k)].norm();
        for i in k + 1..=last_row {
            let v = band[idx(i, k)].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return f64::NEG_INFINITY;
        }
        if piv != k {
            for col in k..=last_col {
                band.swap(idx(k, col), idx(piv, col));
            }
        }
        let pivot = band[idx(k, k)];
        log_det += pivot.norm().ln();
        for i in k + 1..=last_row {
            let f = band[idx(i, k)] / pivot;
            if f == ZERO {
                continue;
            }
            for col in k + 1..=last_col {
                let u = band[idx(k, col)];
                band[idx(i, col)] -= f * u;
            }
        }
    }
    log_det
}

/// Determinant by LU with partial pivoting; the empty matrix has determinant 1.
pub fn det_dense(a: &DenseMatrix) -> Complex64 {
    let n = a.n;
    let mut m = a.data.clone();
    let mut det = ONE;
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| m[i * n + k].norm().total_cmp(&m[j * n + k].norm())).expect("non-empty range");
        if m[piv * n + k] == ZERO {
            return ZERO;
        }
        if piv != k {
            for col in 0..n {
                m.swap(k * n + col, piv * n + col);
            }
            det = -det;
        }
        let pivot = m[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let f = m[i * n + k] / pivot;
            for col in k + 1..n {
                let u = m[k * n + col];
                m[i * n + col] -= f * u;
            }
        }
    }
    det
}

/// Block matrix `[[M, Y], [X, N]]` whose coupling blocks are zero except
/// `X[0][r-1] = x` and `Y[r-1][0] = y`.
pub fn assemble_block(m: &DenseMatrix, nb: &DenseMatrix, x: Complex64, y: Complex64) -> DenseMatrix {
    let (r, s) = (m.n, nb.n);
    let mut a = DenseMatrix::zeros(r + s);
    for i in 0..r {
        for k in 0..r {
            a[(i, k)] = m[(i, k)];
        }
    }
    for i in 0..s {
        for k in 0..s {
            a[(r + i, r + k)] = nb[(i, k)];
        }
    }
    a[(r, r - 1)] = x;
    a[(r - 1, r)] = y;
    a
}

/// `det M det N - x y det M' det N'`, where `M'` drops the last row and column of `M` and
/// `N'` drops the first of `N`. Equals the determinant of [`assemble_block`].
pub fn block_det(m: &DenseMatrix, nb: &DenseMatrix, x: Complex64, y: Complex64) -> Complex64 {
    assert!(m.n >= 1 && nb.n >= 1, "blocks must be non-empty");
    let m_minor = m.principal(0..m.n - 1);
    let n_minor = nb.principal(1..nb.n);
    det_dense(m) * det_dense(nb) - x * y * det_dense(&m_minor) * det_dense(&n_minor)
}

/// Largest distance in a greedy closest-pair matching of two equally sized multisets.
pub fn match_spectra(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "spectra must have equal size");
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, k));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst = 0.0f64;
    let mut matched = 0;
    for (d, i, k) in pairs {
        if !used_a[i] && !used_b[k] {
            used_a[i] = true;
            used_b[k] = true;
            worst = worst.max(d);
            matched += 1;
            if matched == a.len() {
                break;
            }
        }
    }
    worst
}
