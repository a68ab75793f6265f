use num_complex::Complex64;

use crate::error::{Error, Result};

/// Finite multiset of complex numbers, read as a uniform measure where needed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    pub points: Vec<Complex64>,
}

impl PointCloud {
    pub fn new(points: Vec<Complex64>) -> Self {
        PointCloud { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.points.iter()
    }

    /// Weight carried by each point when the cloud is read as a probability measure.
    pub fn weight(&self) -> f64 {
        1.0 / self.points.len() as f64
    }

    pub fn bounding_box(&self) -> Option<Window> {
        let first = *self.points.first()?;
        let mut w = Window { min: first, max: first };
        for p in &self.points[1..] {
            w.min.re = w.min.re.min(p.re);
            w.min.im = w.min.im.min(p.im);
            w.max.re = w.max.re.max(p.re);
            w.max.im = w.max.im.max(p.im);
        }
        Some(w)
    }

    pub fn extend(&mut self, other: &PointCloud) {
        self.points.extend_from_slice(&other.points);
    }

    /// Fraction of this cloud lying within `radius` of some point of `other`.
    pub fn fraction_within(&self, other: &PointCloud, radius: f64) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyCloud);
        }
        let index = NearestIndex::new(other)?;
        let hits = self.points.iter().filter(|p| index.nearest_distance(**p) <= radius).count();
        Ok(hits as f64 / self.len() as f64)
    }
}

impl From<Vec<Complex64>> for PointCloud {
    fn from(points: Vec<Complex64>) -> Self {
        PointCloud { points }
    }
}

impl FromIterator<Complex64> for PointCloud {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        PointCloud { points: iter.into_iter().collect() }
    }
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub min: Complex64,
    pub max: Complex64,
}

impl Window {
    pub fn width(&self) -> f64 {
        self.max.re - self.min.re
    }

    pub fn height(&self) -> f64 {
        self.max.im - self.min.im
    }

    /// Grows each side by `fraction` of the larger extent (so degenerate boxes still open up).
    pub fn padded(&self, fraction: f64) -> Window {
        let extent = self.width().max(self.height()).max(1e-3);
        let pad = fraction * extent;
        Window { min: self.min - Complex64::new(pad, pad), max: self.max + Complex64::new(pad, pad) }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (self.min.re..=self.max.re).contains(&z.re) && (self.min.im..=self.max.im).contains(&z.im)
    }

    pub fn union(&self, other: &Window) -> Window {
        Window {
            min: Complex64::new(self.min.re.min(other.min.re), self.min.im.min(other.min.im)),
            max: Complex64::new(self.max.re.max(other.max.re), self.max.im.max(other.max.im)),
        }
    }
}

/// Uniform bucket grid for nearest-neighbour queries against a fixed cloud.
pub struct NearestIndex<'a> {
    points: &'a [Complex64],
    origin: Complex64,
    cell: f64,
    nx: usize,
    ny: usize,
    /// Bucket start offsets into `order` (CSR layout), length nx*ny + 1.
    starts: Vec<usize>,
    order: Vec<usize>,
}

impl<'a> NearestIndex<'a> {
    pub fn new(cloud: &'a PointCloud) -> Result<Self> {
        let bbox = cloud.bounding_box().ok_or(Error::EmptyCloud)?;
        let points = &cloud.points[..];
        let n = points.len();
        let extent = bbox.width().max(bbox.height());
        let side = (n as f64).sqrt().ceil().max(1.0);
        let cell = if extent > 0.0 { extent / side } else { 1.0 };
        let nx = (bbox.width() / cell).floor() as usize + 1;
        let ny = (bbox.height() / cell).floor() as usize + 1;
        let bucket = |p: Complex64| -> usize {
            let ix = (((p.re - bbox.min.re) / cell) as usize).min(nx - 1);
            let iy = (((p.im - bbox.min.im) / cell) as usize).min(ny - 1);
            iy * nx + ix
        };
        let mut counts = vec![0usize; nx * ny + 1];
        for p in points {
            counts[bucket(*p) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let starts = counts.clone();
        let mut fill = counts;
        let mut order = vec![0usize; n];
        for (i, p) in points.iter().enumerate() {
            let b = bucket(*p);
            order[fill[b]] = i;
            fill[b] += 1;
        }
        Ok(NearestIndex { points, origin: bbox.min, cell, nx, ny, starts, order })
    }

    /// Distance from `z` to the closest indexed point.
    pub fn nearest_distance(&self, z: Complex64) -> f64 {
        let fx = (z.re - self.origin.re) / self.cell;
        let fy = (z.im - self.origin.im) / self.cell;
        let cx = fx.floor().clamp(0.0, (self.nx - 1) as f64) as isize;
        let cy = fy.floor().clamp(0.0, (self.ny - 1) as f64) as isize;
        let mut best = f64::INFINITY;
        let max_ring = self.nx.max(self.ny) as isize;
        for ring in 0..=max_ring {
            // A point in ring r is at least r - 1 cells away from the query.
            let lower = (ring - 1).max(0) as f64 * self.cell;
            if lower > best {
                break;
            }
            let (nx, ny) = (self.nx as isize, self.ny as isize);
            let mut scan = |ix: isize, iy: isize| {
                // Skip buckets whose rectangle is already farther than the best hit.
                let gx = (ix as f64 - fx).max(fx - (ix + 1) as f64).max(0.0);
                let gy = (iy as f64 - fy).max(fy - (iy + 1) as f64).max(0.0);
                if gx.hypot(gy) * self.cell > best {
                    return;
                }
                let b = iy as usize * self.nx + ix as usize;
                for &k in &self.order[self.starts[b]..self.starts[b + 1]] {
                    best = best.min((self.points[k] - z).norm());
                }
            };
            // Top and bottom rows of the ring, then its left and right columns without corners.
            for iy in [cy - ring, cy + ring] {
                if (0..ny).contains(&iy) {
                    for ix in (cx - ring).max(0)..=(cx + ring).min(nx - 1) {
                        scan(ix, iy);
                    }
                }
                if ring == 0 {
                    break;
                }
            }
            for ix in [cx - ring, cx + ring] {
                if ring > 0 && (0..nx).contains(&ix) {
                    for iy in (cy - ring + 1).max(0)..=(cy + ring - 1).min(ny - 1) {
                        scan(ix, iy);
                    }
                }
            }
        }
        best
    }
}
