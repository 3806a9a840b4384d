//! Points, finite point clouds, and the metric toolkit: Euclidean distance,
//! Hausdorff distance between clouds, and cloud diameter.
//!
//! Clouds are the computational stand-in for compact sets. Construction
//! deduplicates within [`DEDUP_TOL`], always keeping the first-inserted
//! representative, so cloud contents are a deterministic function of the
//! input sequence. An empty cloud is an error, matching the restriction of
//! the underlying theory to nonempty compact sets.

use crate::error::{Error, Result};
use crate::numeric::max_finite;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Deduplication tolerance for clouds and measure atoms.
pub const DEDUP_TOL: f64 = 1e-12;

/// A point of Euclidean space, dimension `>= 1`, all coordinates finite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("a point needs at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("point coordinates"));
        }
        Ok(Point { coords })
    }

    /// 1D convenience constructor; panics on non-finite input.
    pub fn scalar(x: f64) -> Self {
        Point::new(vec![x]).expect("finite scalar")
    }

    /// 2D convenience constructor; panics on non-finite input.
    pub fn pair(x: f64, y: f64) -> Self {
        Point::new(vec![x, y]).expect("finite pair")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;
    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        p.coords
    }
}

/// Euclidean distance. Errors on dimension mismatch.
pub fn distance(a: &Point, b: &Point) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(dist(a, b))
}

/// Euclidean distance with dimensions already validated.
pub(crate) fn dist(a: &Point, b: &Point) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.coords.iter().zip(&b.coords) {
        let d = x - y;
        s += d * d;
    }
    s.sqrt()
}

/// A nonempty finite set of points of a common dimension, deduplicated
/// within a tolerance at construction (first-inserted representative wins).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct PointCloud {
    points: Vec<Point>,
    dim: usize,
}

impl PointCloud {
    /// Builds a cloud with the default tolerance [`DEDUP_TOL`].
    pub fn new(points: Vec<Point>) -> Result<Self> {
        Self::with_dedup(points, DEDUP_TOL)
    }

    /// Builds a cloud deduplicating within `tol`.
    pub fn with_dedup(points: Vec<Point>, tol: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("a point cloud must be nonempty"));
        }
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Error::invalid("dedup tolerance must be finite and >= 0"));
        }
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        let kept = dedup_indices(&points, tol);
        let points = kept.into_iter().map(|i| points[i].clone()).collect();
        Ok(PointCloud { points, dim })
    }

    /// Cloud from 1D coordinates.
    pub fn from_scalars(xs: &[f64]) -> Result<Self> {
        let pts = xs.iter().map(|&x| Point::new(vec![x])).collect::<Result<Vec<_>>>()?;
        PointCloud::new(pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    /// Union of two clouds (self's points first, then other's, deduplicated).
    pub fn union(&self, other: &PointCloud) -> Result<PointCloud> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        PointCloud::new(pts)
    }

    /// Distance from a point to the cloud (infimum over members).
    pub fn dist_to(&self, p: &Point) -> Result<f64> {
        if p.dim() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        Ok(self
            .points
            .iter()
            .map(|q| dist(p, q))
            .fold(f64::INFINITY, f64::min))
    }
}

impl TryFrom<Vec<Point>> for PointCloud {
    type Error = Error;
    fn try_from(points: Vec<Point>) -> Result<Self> {
        PointCloud::new(points)
    }
}

impl From<PointCloud> for Vec<Point> {
    fn from(c: PointCloud) -> Vec<Point> {
        c.points
    }
}

/// Indices of the deduplicated representatives, in insertion order.
pub(crate) fn dedup_indices(points: &[Point], tol: f64) -> Vec<usize> {
    dedup_assign(points, tol).0
}

/// Greedy first-representative deduplication: a point is assigned to the
/// first earlier *kept* point within `tol`, else it becomes a representative
/// itself. Returns the kept input indices (insertion order) and, for every
/// input index, the position of its representative within the kept list.
///
/// Small inputs use a quadratic scan; larger ones a spatial hash grid with
/// cell width `tol` (points within `tol` differ by at most one cell per
/// axis). Both paths give identical results.
pub(crate) fn dedup_assign(points: &[Point], tol: f64) -> (Vec<usize>, Vec<usize>) {
    let mut kept: Vec<usize> = Vec::new();
    let mut assign: Vec<usize> = Vec::with_capacity(points.len());

    if points.len() <= 2048 || tol == 0.0 {
        for p in points.iter() {
            match kept.iter().position(|&k| dist(&points[k], p) <= tol) {
                Some(pos) => assign.push(pos),
                None => {
                    assign.push(kept.len());
                    kept.push(assign.len() - 1);
                }
            }
        }
        return (kept, assign);
    }

    let dim = points[0].dim();
    let cell = tol;
    // buckets hold positions into `kept`
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let key = |p: &Point| -> Vec<i64> {
        p.coords().iter().map(|&c| (c / cell).floor() as i64).collect()
    };
    let mut neighbor = vec![0i64; dim];
    for (i, p) in points.iter().enumerate() {
        let k = key(p);
        // Scan all neighbor cells and keep the *earliest* matching
        // representative so the grid path agrees with the quadratic path
        // even when several representatives lie within tol.
        let mut found: Option<usize> = None;
        let mut offsets = vec![-1i64; dim];
        'cells: loop {
            for ((n, base), off) in neighbor.iter_mut().zip(&k).zip(&offsets) {
                *n = base + off;
            }
            if let Some(bucket) = grid.get(&neighbor) {
                for &pos in bucket {
                    if dist(&points[kept[pos]], p) <= tol && found.is_none_or(|f| pos < f) {
                        found = Some(pos);
                    }
                }
            }
            // advance the odometer over {-1, 0, 1}^dim
            let mut axis = 0;
            loop {
                if axis == dim {
                    break 'cells;
                }
                offsets[axis] += 1;
                if offsets[axis] <= 1 {
                    break;
                }
                offsets[axis] = -1;
                axis += 1;
            }
        }
        match found {
            Some(pos) => assign.push(pos),
            None => {
                let pos = kept.len();
                assign.push(pos);
                kept.push(i);
                grid.entry(k).or_default().push(pos);
            }
        }
    }
    (kept, assign)
}

/// Directed Hausdorff distance: sup over `a` of dist(a, B).
fn directed_hausdorff(a: &PointCloud, b: &PointCloud) -> f64 {
    a.points()
        .par_iter()
        .map(|p| {
            b.points()
                .iter()
                .map(|q| dist(p, q))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max)
}

/// 1D directed Hausdorff against a pre-sorted coordinate list: the nearest
/// neighbor of `x` is adjacent to its insertion point. Uses the same
/// `sqrt(d*d)` arithmetic as [`dist`], so it agrees with the brute-force
/// path bit for bit.
fn directed_hausdorff_1d(a: &PointCloud, b_sorted: &[f64]) -> f64 {
    a.points()
        .par_iter()
        .map(|p| {
            let x = p.coords()[0];
            let idx = b_sorted.partition_point(|&v| v < x);
            let mut best = f64::INFINITY;
            if idx < b_sorted.len() {
                let d = x - b_sorted[idx];
                best = best.min((d * d).sqrt());
            }
            if idx > 0 {
                let d = x - b_sorted[idx - 1];
                best = best.min((d * d).sqrt());
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// Hausdorff distance between two clouds (max of the two directed sups).
/// Exact on the given data; errors on dimension mismatch. On the line the
/// nearest neighbors come from sorted coordinate lists, elsewhere from a
/// brute-force scan; both give the identical exact result.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    if a.dim() == 1 {
        let sorted = |c: &PointCloud| {
            let mut xs: Vec<f64> = c.points().iter().map(|p| p.coords()[0]).collect();
            xs.sort_by(|u, v| u.partial_cmp(v).expect("coordinates are finite"));
            xs
        };
        let (sa, sb) = (sorted(a), sorted(b));
        return Ok(directed_hausdorff_1d(a, &sb).max(directed_hausdorff_1d(b, &sa)));
    }
    Ok(directed_hausdorff(a, b).max(directed_hausdorff(b, a)))
}

/// Diameter of a cloud: max pairwise distance (0 for singletons).
pub fn diameter(cloud: &PointCloud) -> f64 {
    let pts = cloud.points();
    (0..pts.len())
        .into_par_iter()
        .map(|i| {
            max_finite((i + 1..pts.len()).map(|j| dist(&pts[i], &pts[j]))).unwrap_or(0.0)
        })
        .reduce(|| 0.0, f64::max)
}
