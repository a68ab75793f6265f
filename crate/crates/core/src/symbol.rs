//! Laurent-polynomial symbols `a(x, z) = sum_j a_j(x) z^j`, their ranges and the
//! tridiagonal support set (the union over `x` of the arcsine intervals).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::expr::{parse_expr, Expr};
use crate::potential::FrozenSymbol;

/// Symbol with coefficient functions for powers `-lower ..= upper`; absent powers are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSymbol {
    lower: usize,
    upper: usize,
    coeffs: BTreeMap<i32, Expr>,
}

impl LaurentSymbol {
    /// Builds a symbol with explicit orders. Every power must lie in `-lower ..= upper`.
    pub fn new(lower: usize, upper: usize, coeffs: impl IntoIterator<Item = (i32, Expr)>) -> Result<Self> {
        if lower + upper == 0 {
            return Err(Error::InvalidSymbol("need p + q >= 1".into()));
        }
        let mut map = BTreeMap::new();
        for (power, expr) in coeffs {
            if power < -(lower as i32) || power > upper as i32 {
                return Err(Error::InvalidSymbol(format!("power {power} outside [-{lower}, {upper}]")));
            }
            if map.insert(power, expr).is_some() {
                return Err(Error::InvalidSymbol(format!("power {power} given twice")));
            }
        }
        Ok(LaurentSymbol { lower, upper, coeffs: map })
    }

    /// Parses `(power, expression)` pairs; the orders are the extreme powers present.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(i32, S)]) -> Result<Self> {
        let lower = pairs.iter().map(|(j, _)| (-j).max(0)).max().unwrap_or(0) as usize;
        let upper = pairs.iter().map(|(j, _)| (*j).max(0)).max().unwrap_or(0) as usize;
        let parsed = pairs.iter().map(|(j, s)| Ok((*j, parse_expr(s.as_ref())?))).collect::<Result<Vec<_>>>()?;
        LaurentSymbol::new(lower, upper, parsed)
    }

    /// Lower order `q`: the matrix has `q` subdiagonals.
    pub fn lower(&self) -> usize {
        self.lower
    }

    /// Upper order `p`: the matrix has `p` superdiagonals.
    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn powers(&self) -> std::ops::RangeInclusive<i32> {
        -(self.lower as i32)..=self.upper as i32
    }

    pub fn coefficient_expr(&self, power: i32) -> Option<&Expr> {
        self.coeffs.get(&power)
    }

    /// `k`-th Fourier coefficient of `a(x, .)`; exact because the symbol is a Laurent polynomial.
    pub fn fourier_coefficient(&self, k: i32, x: f64) -> Result<Complex64> {
        match self.coeffs.get(&k) {
            Some(e) => Ok(e.eval(x)?),
            None => Ok(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn eval(&self, x: f64, z: Complex64) -> Result<Complex64> {
        self.frozen(x)?.eval(z)
    }

    /// Coefficients at a fixed `x`.
    pub fn frozen(&self, x: f64) -> Result<FrozenLaurent> {
        let coeffs = self.powers().map(|k| self.fourier_coefficient(k, x)).collect::<Result<Vec<_>>>()?;
        Ok(FrozenLaurent { lower: self.lower, upper: self.upper, coeffs })
    }

    pub fn is_x_independent(&self) -> bool {
        self.coeffs.values().all(Expr::is_constant)
    }

    /// Samples `a(x_r, e^{i t_s})` with `x_r = r / nx` (`r = 0..=nx`) and `t_s = 2 pi s / nt`.
    pub fn range(&self, nx: usize, nt: usize) -> Result<PointCloud> {
        if nx == 0 || nt == 0 {
            return Err(Error::InvalidArgument("range grid needs nx, nt >= 1".into()));
        }
        let circle: Vec<Complex64> =
            (0..nt).map(|s| Complex64::from_polar(1.0, 2.0 * PI * s as f64 / nt as f64)).collect();
        let mut points = Vec::with_capacity((nx + 1) * nt);
        for r in 0..=nx {
            let frozen = self.frozen(r as f64 / nx as f64)?;
            for z in &circle {
                points.push(frozen.eval(*z)?);
            }
        }
        Ok(PointCloud::new(points))
    }

    pub fn as_tridiagonal(&self) -> Option<TridiagonalSymbol> {
        if self.lower > 1 || self.upper > 1 {
            return None;
        }
        let get = |k| self.coeffs.get(&k).cloned().unwrap_or_else(|| parse_expr("0").unwrap());
        Some(TridiagonalSymbol { d: get(-1), b: get(0), c: get(1) })
    }

    /// `(power, expression)` pairs in increasing power order, suitable for config files.
    pub fn to_pairs(&self) -> Vec<(i32, String)> {
        self.coeffs.iter().map(|(k, e)| (*k, e.to_string())).collect()
    }
}

/// Laurent symbol with the coefficient functions evaluated at one `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenLaurent {
    pub lower: usize,
    pub upper: usize,
    /// `coeffs[j + lower]` multiplies `z^j`.
    pub coeffs: Vec<Complex64>,
}

impl FrozenLaurent {
    pub fn coefficient(&self, power: i32) -> Complex64 {
        let idx = power + self.lower as i32;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroArgument);
        }
        // Horner in z from the top power, then shift down by z^-lower.
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        Ok(acc * z.powi(-(self.lower as i32)))
    }

    /// Drops identically zero outer coefficients so the orders are exact.
    pub fn trimmed(&self) -> FrozenLaurent {
        let zero = Complex64::new(0.0, 0.0);
        let mut lower = self.lower;
        let mut upper = self.upper;
        while upper > 0 && self.coefficient(upper as i32) == zero {
            upper -= 1;
        }
        while lower > 0 && self.coefficient(-(lower as i32)) == zero {
            lower -= 1;
        }
        let coeffs = (-(lower as i32)..=upper as i32).map(|k| self.coefficient(k)).collect();
        FrozenLaurent { lower, upper, coeffs }
    }

    pub fn range(&self, nt: usize) -> PointCloud {
        (0..nt)
            .map(|s| {
                let z = Complex64::from_polar(1.0, 2.0 * PI * s as f64 / nt as f64);
                self.eval(z).expect("unit circle avoids z = 0")
            })
            .collect()
    }
}

/// `a(x, z) = d(x) z^-1 + b(x) + c(x) z`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSymbol {
    pub d: Expr,
    pub b: Expr,
    pub c: Expr,
}

impl TridiagonalSymbol {
    pub fn parse(d: &str, b: &str, c: &str) -> Result<Self> {
        Ok(TridiagonalSymbol { d: parse_expr(d)?, b: parse_expr(b)?, c: parse_expr(c)? })
    }

    pub fn frozen(&self, x: f64) -> Result<FrozenSymbol> {
        Ok(FrozenSymbol { b: self.b.eval(x)?, c: self.c.eval(x)?, d: self.d.eval(x)? })
    }

    pub fn to_laurent(&self) -> LaurentSymbol {
        LaurentSymbol::new(1, 1, [(-1, self.d.clone()), (0, self.b.clone()), (1, self.c.clone())])
            .expect("orders are fixed")
    }

    /// Same symbol with the roles of `c` and `d` exchanged (the transposed matrix family).
    pub fn swapped(&self) -> TridiagonalSymbol {
        TridiagonalSymbol { d: self.c.clone(), b: self.b.clone(), c: self.d.clone() }
    }

    pub fn is_x_independent(&self) -> bool {
        self.b.is_constant() && self.c.is_constant() && self.d.is_constant()
    }

    /// Arcsine-measure interval at every grid point `x_r = r / nx`, `r = 0..=nx`.
    pub fn xi_support(&self, nx: usize) -> Result<Vec<ComplexInterval>> {
        if nx == 0 {
            return Err(Error::InvalidArgument("nx must be >= 1".into()));
        }
        (0..=nx).map(|r| Ok(self.frozen(r as f64 / nx as f64)?.interval())).collect()
    }
}

/// Segment `{center + t * half_width : t in [-1, 1]}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexInterval {
    pub center: Complex64,
    pub half_width: Complex64,
}

impl ComplexInterval {
    pub fn endpoints(&self) -> (Complex64, Complex64) {
        (self.center - self.half_width, self.center + self.half_width)
    }

    pub fn point_at(&self, t: f64) -> Complex64 {
        self.center + self.half_width * t
    }

    pub fn is_degenerate(&self) -> bool {
        self.half_width == Complex64::new(0.0, 0.0)
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        let w2 = self.half_width.norm_sqr();
        if w2 == 0.0 {
            return (z - self.center).norm();
        }
        let t = ((z - self.center) * self.half_width.conj()).re / w2;
        (z - self.point_at(t.clamp(-1.0, 1.0))).norm()
    }

    /// `m` equispaced points including both endpoints (`m = 1` gives the center).
    pub fn samples(&self, m: usize) -> impl Iterator<Item = Complex64> + '_ {
        (0..m).map(move |s| {
            let t = if m == 1 { 0.0 } else { -1.0 + 2.0 * s as f64 / (m - 1) as f64 };
            self.point_at(t)
        })
    }
}

/// Arcsine-support intervals of a tridiagonal symbol on the grid `x_r = r / nx`.
pub fn xi_support_tridiagonal(sym: &TridiagonalSymbol, nx: usize) -> Result<Vec<ComplexInterval>> {
    sym.xi_support(nx)
}

/// Dense samples of the union of intervals, `per_interval` points each.
pub fn sample_intervals(intervals: &[ComplexInterval], per_interval: usize) -> PointCloud {
    intervals.iter().flat_map(|iv| iv.samples(per_interval).collect::<Vec<_>>()).collect()
}
