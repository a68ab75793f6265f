//! Twisted Toeplitz matrices with structured random perturbations.
//!
//! A symbol `a(x, z) = sum_j a_j(x) z^j` with coefficient functions on `[0, 1]` defines the
//! `n x n` banded matrix whose `(i, k)` entry is `a_{k-i}` sampled at `min(i, k) / n`
//! (1-based), so the superdiagonal carries `a_1` and the subdiagonal carries `a_{-1}`.
//! The crate builds these matrices (optionally perturbed by scaled i.i.d. noise or sampled at
//! random points), computes their spectra and logarithmic potentials, constructs the
//! predicted limiting measures and compares point clouds.

pub mod cloud;
pub mod error;
pub mod expr;
pub mod limits;
pub mod linalg;
pub mod matrix;
pub mod measures;
pub mod potential;
pub mod presets;
pub mod rng;
pub mod symbol;

pub use num_complex::Complex64;

pub use cloud::{NearestIndex, PointCloud, Window};
pub use error::{Error, Result};
pub use expr::{parse_expr, EvalError, Expr, ParseError};
pub use limits::{arcsine_sample, frozen_esm, mu_sample, schmidt_spitzer_set, RootLocus};
pub use linalg::{eigenvalues, log_abs_det, DenseMatrix, EigenOptions, HessenbergMatrix, Spectrum};
pub use matrix::{
    build_perturbed, build_randomized, build_twisted, sample_order_statistics, BandedMatrix, NoiseDist, NoiseSpec,
    SamplingPoints, Sigma,
};
pub use measures::{esm, hausdorff, sample_log_potential, sliced_w1, EmpiricalMeasure};
pub use potential::{continuant_log_det, frozen_gamma, gamma_field, integrated_gamma, FrozenSymbol};
pub use symbol::{ComplexInterval, FrozenLaurent, LaurentSymbol, TridiagonalSymbol};
