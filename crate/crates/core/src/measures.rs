//! Empirical measures and distances between planar point clouds.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cloud::{NearestIndex, PointCloud};
use crate::error::{Error, Result};
use crate::linalg::Spectrum;

/// Default number of projection directions for [`sliced_w1`].
pub const DEFAULT_ANGLES: usize = 32;

/// Uniform probability measure on a non-empty point cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    cloud: PointCloud,
}

impl EmpiricalMeasure {
    pub fn new(cloud: PointCloud) -> Result<Self> {
        if cloud.is_empty() {
            return Err(Error::EmptyCloud);
        }
        Ok(EmpiricalMeasure { cloud })
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn len(&self) -> usize {
        self.cloud.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self) -> f64 {
        self.cloud.weight()
    }

    pub fn total_mass(&self) -> f64 {
        self.weight() * self.len() as f64
    }

    pub fn into_cloud(self) -> PointCloud {
        self.cloud
    }
}

impl TryFrom<PointCloud> for EmpiricalMeasure {
    type Error = Error;

    fn try_from(cloud: PointCloud) -> Result<Self> {
        EmpiricalMeasure::new(cloud)
    }
}

/// Eigenvalue-counting measure of a fully converged spectrum.
pub fn esm(spectrum: &Spectrum) -> Result<EmpiricalMeasure> {
    if !spectrum.all_converged() {
        return Err(Error::NoConvergence { unconverged: spectrum.unconverged(), n: spectrum.len() });
    }
    EmpiricalMeasure::new(PointCloud::new(spectrum.values.clone()))
}

fn sorted_projection(cloud: &PointCloud, theta: f64) -> Vec<f64> {
    let (s, c) = theta.sin_cos();
    let mut v: Vec<f64> = cloud.iter().map(|p| p.re * c + p.im * s).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// One-dimensional W1 between uniform measures on sorted samples, integrating
/// `|F^-1(u) - G^-1(u)|` exactly over the merged quantile breakpoints `i/n` and `j/m`.
pub fn w1_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (n, m) = (a.len() as u128, b.len() as u128);
    assert!(n > 0 && m > 0, "empty sample");
    // Positions on [0, 1] are measured in units of 1/(n m).
    let (mut i, mut j) = (0usize, 0usize);
    let mut pos: u128 = 0;
    let mut total = 0.0;
    let end = n * m;
    while pos < end {
        let next_a = (i as u128 + 1) * m;
        let next_b = (j as u128 + 1) * n;
        let next = next_a.min(next_b);
        total += (next - pos) as f64 * (a[i] - b[j]).abs();
        pos = next;
        if next == next_a {
            i += 1;
        }
        if next == next_b {
            j += 1;
        }
    }
    total / end as f64
}

/// Mean of the 1-D W1 distances between projections onto the directions `k pi / angles`.
pub fn sliced_w1(p: &EmpiricalMeasure, q: &EmpiricalMeasure, angles: usize) -> Result<f64> {
    if angles == 0 {
        return Err(Error::InvalidArgument("need at least one projection angle".into()));
    }
    let per_angle: Vec<f64> = (0..angles)
        .into_par_iter()
        .map(|k| {
            let theta = k as f64 * std::f64::consts::PI / angles as f64;
            w1_sorted(&sorted_projection(&p.cloud, theta), &sorted_projection(&q.cloud, theta))
        })
        .collect();
    Ok(per_angle.iter().sum::<f64>() / angles as f64)
}

/// `sup_{p in P} inf_{q in Q} |p - q|`.
pub fn directed_hausdorff(p: &PointCloud, q: &PointCloud) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let index = NearestIndex::new(q)?;
    Ok(p.iter().map(|z| index.nearest_distance(*z)).fold(0.0, f64::max))
}

pub fn hausdorff(p: &PointCloud, q: &PointCloud) -> Result<f64> {
    Ok(directed_hausdorff(p, q)?.max(directed_hausdorff(q, p)?))
}

/// `(1/|P|) sum log|p - z|`; `-inf` when `z` is a point of the cloud.
pub fn sample_log_potential(p: &EmpiricalMeasure, z: Complex64) -> f64 {
    p.cloud.iter().map(|v| (v - z).norm().ln()).sum::<f64>() * p.weight()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues;
    use crate::matrix::build_twisted;
    use crate::potential::FrozenSymbol;
    use crate::symbol::LaurentSymbol;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn measure(points: &[Complex64]) -> EmpiricalMeasure {
        EmpiricalMeasure::new(PointCloud::new(points.to_vec())).unwrap()
    }

    fn jacobi(n: usize) -> Spectrum {
        let sym = LaurentSymbol::from_pairs(&[(-1, "1"), (1, "1")]).unwrap();
        eigenvalues(&build_twisted(&sym, n).unwrap())
    }

    #[test]
    fn esm_examples() {
        let single = Spectrum { values: vec![c(1.0, 2.0)], converged: vec![true], iterations: 0 };
        let m = esm(&single).unwrap();
        assert_eq!(m.cloud().points, vec![c(1.0, 2.0)]);
        assert_eq!(m.total_mass(), 1.0);

        let m4 = esm(&jacobi(4)).unwrap();
        assert_eq!(m4.len(), 4);
        assert_eq!(m4.weight(), 0.25);

        let bad = Spectrum { values: vec![ZERO_C], converged: vec![false], iterations: 3 };
        assert!(esm(&bad).is_err());
        assert!(EmpiricalMeasure::new(PointCloud::default()).is_err());
    }

    const ZERO_C: Complex64 = Complex64 { re: 0.0, im: 0.0 };

    #[test]
    fn sliced_w1_examples() {
        let a = measure(&[c(0.0, 0.0)]);
        let b = measure(&[c(1.0, 0.0)]);
        assert_eq!(sliced_w1(&a, &a, 32).unwrap(), 0.0);
        assert!((sliced_w1(&a, &b, 2).unwrap() - 0.5).abs() < 1e-15);
        let expected: f64 = (0..32).map(|k| (k as f64 * std::f64::consts::PI / 32.0).cos().abs()).sum::<f64>() / 32.0;
        let got = sliced_w1(&a, &b, 32).unwrap();
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.636108).abs() < 1e-6);
        assert!(sliced_w1(&a, &b, 0).is_err());
    }

    #[test]
    fn w1_unequal_sizes_is_exact() {
        // {0} vs {0, 1}: half the mass moves distance 1.
        assert!((w1_sorted(&[0.0], &[0.0, 1.0]) - 0.5).abs() < 1e-15);
        // {0, 3} vs {0, 1, 2}: quantiles 0|0 on [0,1/3], 0|1 on [1/3,1/2], 3|1 on [1/2,2/3], 3|2 on [2/3,1].
        let expected = 1.0 / 6.0 + 2.0 / 6.0 + 1.0 / 3.0;
        assert!((w1_sorted(&[0.0, 3.0], &[0.0, 1.0, 2.0]) - expected).abs() < 1e-15);
    }

    #[test]
    fn hausdorff_examples() {
        let zero = PointCloud::new(vec![c(0.0, 0.0)]);
        let one = PointCloud::new(vec![c(1.0, 0.0)]);
        let pair = PointCloud::new(vec![c(0.0, 0.0), c(10.0, 0.0)]);
        assert_eq!(hausdorff(&zero, &zero).unwrap(), 0.0);
        assert_eq!(hausdorff(&zero, &one).unwrap(), 1.0);
        assert_eq!(hausdorff(&pair, &zero).unwrap(), 10.0);
        assert_eq!(directed_hausdorff(&pair, &zero).unwrap(), 10.0);
        assert_eq!(directed_hausdorff(&zero, &pair).unwrap(), 0.0);
        assert!(hausdorff(&zero, &PointCloud::default()).is_err());
    }

    #[test]
    fn log_potential_examples() {
        let m = measure(&[c(0.0, 0.0)]);
        assert!((sample_log_potential(&m, c(std::f64::consts::E, 0.0)) - 1.0).abs() < 1e-15);
        assert_eq!(sample_log_potential(&m, c(0.0, 0.0)), f64::NEG_INFINITY);

        let z = c(3.0, 0.0);
        let potential = sample_log_potential(&esm(&jacobi(200)).unwrap(), z);
        let gamma = FrozenSymbol::new(ZERO_C, c(1.0, 0.0), c(1.0, 0.0)).gamma(z);
        assert!((potential - gamma).abs() < 5e-3);
    }

    #[test]
    fn log_potential_matches_log_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut m = crate::matrix::BandedMatrix::zeros(120, 1, 2);
        for off in -1isize..=2 {
            for v in m.diagonal_mut(off) {
                *v = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        let z = c(4.0, -3.0);
        let spec = eigenvalues(&m);
        let lhs = sample_log_potential(&esm(&spec).unwrap(), z) * 120.0;
        let rhs = crate::linalg::log_abs_det(&m, z);
        assert!((lhs - rhs).abs() < 1e-6 * 120.0);
    }

    fn arb_cloud() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..25)
    }

    fn to_measure(v: &[(f64, f64)]) -> EmpiricalMeasure {
        EmpiricalMeasure::new(v.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn sliced_w1_is_a_pseudometric(a in arb_cloud(), b in arb_cloud(), cc in arb_cloud()) {
            let (p, q, r) = (to_measure(&a), to_measure(&b), to_measure(&cc));
            let pq = sliced_w1(&p, &q, 8).unwrap();
            let qp = sliced_w1(&q, &p, 8).unwrap();
            let pr = sliced_w1(&p, &r, 8).unwrap();
            let rq = sliced_w1(&r, &q, 8).unwrap();
            prop_assert!(pq >= 0.0);
            prop_assert!((pq - qp).abs() < 1e-12);
            prop_assert!(pq <= pr + rq + 1e-12);
            prop_assert_eq!(sliced_w1(&p, &p, 8).unwrap(), 0.0);
        }

        #[test]
        fn sliced_w1_translation_bound(a in arb_cloud(), vx in -2.0f64..2.0, vy in -2.0f64..2.0) {
            let p = to_measure(&a);
            let v = c(vx, vy);
            let shifted = EmpiricalMeasure::new(p.cloud().iter().map(|z| z + v).collect()).unwrap();
            prop_assert!(sliced_w1(&p, &shifted, DEFAULT_ANGLES).unwrap() <= v.norm() + 1e-12);
        }
    }
}
