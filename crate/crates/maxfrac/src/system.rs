//! Iterated function systems with probabilities and a max-type contraction
//! verifier, plus the set-level fractal operator and its Picard iteration.
//!
//! A system holds `m` self-maps of `R^dim`, selection probabilities, a
//! comparison function `phi`, and a depth `p >= 1`. The defining condition —
//! for all `x, y`, the largest distance between images under length-`p`
//! compositions is at most `phi` of the largest distance under compositions
//! of length `< p` (the empty composition, i.e. `d(x, y)` itself, included) —
//! cannot be proved by sampling, but it can be *refuted*, and the margin by
//! which finitely many sampled pairs satisfy it is useful evidence.
//! [`verify_phi_max`] computes exactly that.
//!
//! The fractal operator sends a compact set `K` to the union of its map
//! images; on clouds this is [`fractal_step`]. Its Picard iteration
//! [`attractor`] stops when consecutive iterates are within `tol` in
//! Hausdorff distance. That stopping rule bounds the distance to the true
//! attractor only up to a geometric factor, so the run reports the observed
//! per-step contraction ratio rather than assuming one.

use crate::comparison::ComparisonFn;
use crate::error::{Error, Result};
use crate::geometry::{dist, hausdorff, Point, PointCloud};
use crate::numeric;
use crate::words::{word_from_rank, Word, WORD_ENUM_CAP};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One self-map of `R^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[serde(try_from = "RawMapSpec")]
pub enum MapSpec {
    /// `x -> M x + b` with a square matrix `M` (rows of `matrix` are rows of `M`).
    Affine { matrix: Vec<Vec<f64>>, offset: Vec<f64> },
    /// 1D continuous piecewise-linear map through the given `(x, y)` nodes
    /// (strictly increasing `x`), extended beyond the ends with the boundary
    /// segments' slopes.
    IntervalPw { points: Vec<(f64, f64)> },
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum RawMapSpec {
    Affine { matrix: Vec<Vec<f64>>, offset: Vec<f64> },
    IntervalPw { points: Vec<(f64, f64)> },
}

impl TryFrom<RawMapSpec> for MapSpec {
    type Error = Error;
    fn try_from(raw: RawMapSpec) -> Result<Self> {
        match raw {
            RawMapSpec::Affine { matrix, offset } => MapSpec::affine(matrix, offset),
            RawMapSpec::IntervalPw { points } => MapSpec::interval_pw(points),
        }
    }
}

impl MapSpec {
    pub fn affine(matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> Result<Self> {
        let d = offset.len();
        if d == 0 {
            return Err(Error::invalid("affine map needs dimension >= 1"));
        }
        if matrix.len() != d {
            return Err(Error::invalid(format!(
                "affine matrix must be square ({d} rows to match the offset, got {})",
                matrix.len()
            )));
        }
        for row in &matrix {
            if row.len() != d {
                return Err(Error::invalid(format!(
                    "affine matrix must be square ({d} columns, got a row of {})",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("affine matrix entry"));
            }
        }
        if offset.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("affine offset entry"));
        }
        Ok(MapSpec::Affine { matrix, offset })
    }

    /// 1D affine convenience: `x -> a x + b`.
    pub fn affine_1d(a: f64, b: f64) -> Result<Self> {
        MapSpec::affine(vec![vec![a]], vec![b])
    }

    pub fn interval_pw(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("piecewise map needs at least two nodes"));
        }
        for &(x, y) in &points {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::NonFinite("piecewise map node"));
            }
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::invalid("piecewise map abscissae must be strictly increasing"));
            }
        }
        Ok(MapSpec::IntervalPw { points })
    }

    pub fn dim(&self) -> usize {
        match self {
            MapSpec::Affine { offset, .. } => offset.len(),
            MapSpec::IntervalPw { .. } => 1,
        }
    }

    /// Applies the map; the caller guarantees the dimension matches.
    pub fn apply(&self, x: &Point) -> Point {
        debug_assert_eq!(x.dim(), self.dim());
        match self {
            MapSpec::Affine { matrix, offset } => {
                let xs = x.coords();
                let coords: Vec<f64> = matrix
                    .iter()
                    .zip(offset)
                    .map(|(row, b)| {
                        let mut acc = 0.0;
                        for (m, v) in row.iter().zip(xs) {
                            acc += m * v;
                        }
                        acc + b
                    })
                    .collect();
                Point::new(coords).expect("affine image of a finite point is finite")
            }
            MapSpec::IntervalPw { points } => {
                let t = x.coords()[0];
                let n = points.len();
                let seg = if t <= points[0].0 {
                    (points[0], points[1])
                } else if t >= points[n - 1].0 {
                    (points[n - 2], points[n - 1])
                } else {
                    let k = points.partition_point(|&(px, _)| px < t);
                    (points[k - 1], points[k])
                };
                let ((x0, y0), (x1, y1)) = seg;
                let y = y0 + (y1 - y0) * (t - x0) / (x1 - x0);
                Point::scalar(y)
            }
        }
    }
}

/// An iterated function system with probabilities: maps, selection
/// probabilities, comparison function, and contraction depth `p`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawSystem")]
pub struct IfsSystem {
    dim: usize,
    maps: Vec<MapSpec>,
    probs: Vec<f64>,
    phi: ComparisonFn,
    #[serde(rename = "p")]
    depth_p: usize,
}

#[derive(Deserialize)]
struct RawSystem {
    dim: usize,
    maps: Vec<MapSpec>,
    probs: Vec<f64>,
    phi: ComparisonFn,
    p: usize,
}

impl TryFrom<RawSystem> for IfsSystem {
    type Error = Error;
    fn try_from(raw: RawSystem) -> Result<Self> {
        IfsSystem::with_dim(raw.dim, raw.maps, raw.probs, raw.phi, raw.p)
    }
}

impl IfsSystem {
    /// Builds and validates a system, inferring the dimension from the maps.
    pub fn new(maps: Vec<MapSpec>, probs: Vec<f64>, phi: ComparisonFn, p: usize) -> Result<Self> {
        let dim = maps
            .first()
            .ok_or_else(|| Error::invalid("a system needs at least one map"))?
            .dim();
        IfsSystem::with_dim(dim, maps, probs, phi, p)
    }

    pub fn with_dim(
        dim: usize,
        maps: Vec<MapSpec>,
        probs: Vec<f64>,
        phi: ComparisonFn,
        p: usize,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("system dimension must be >= 1"));
        }
        if maps.is_empty() {
            return Err(Error::invalid("a system needs at least one map"));
        }
        if maps.len() > 255 {
            return Err(Error::invalid("at most 255 maps are supported"));
        }
        for (i, map) in maps.iter().enumerate() {
            if map.dim() != dim {
                return Err(Error::invalid(format!(
                    "map {} has dimension {}, system has dimension {dim}",
                    i + 1,
                    map.dim()
                )));
            }
        }
        if probs.len() != maps.len() {
            return Err(Error::invalid(format!(
                "{} maps but {} probabilities",
                maps.len(),
                probs.len()
            )));
        }
        for &q in &probs {
            if !q.is_finite() {
                return Err(Error::NonFinite("selection probability"));
            }
            if q <= 0.0 || q > 1.0 {
                return Err(Error::invalid(format!(
                    "selection probabilities must lie in (0, 1], got {q}"
                )));
            }
        }
        let total = numeric::sum(probs.iter().copied());
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "selection probabilities must sum to 1 (got {total})"
            )));
        }
        if p == 0 {
            return Err(Error::invalid("contraction depth p must be >= 1"));
        }
        // All words of length p must be enumerable.
        let mut count: u128 = 1;
        for _ in 0..p {
            count = count.saturating_mul(maps.len() as u128);
        }
        if count > WORD_ENUM_CAP as u128 {
            return Err(Error::CapExceeded {
                what: "word enumeration (m^p)",
                limit: WORD_ENUM_CAP,
                requested: count.min(usize::MAX as u128) as usize,
            });
        }
        Ok(IfsSystem { dim, maps, probs, phi, depth_p: p })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn map_count(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[MapSpec] {
        &self.maps
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn phi(&self) -> &ComparisonFn {
        &self.phi
    }

    pub fn depth_p(&self) -> usize {
        self.depth_p
    }

    /// Applies map `i` (0-based).
    pub fn apply_map(&self, i: usize, x: &Point) -> Point {
        self.maps[i].apply(x)
    }

    /// Applies the composition selected by `w`: last letter first, so
    /// `apply_word(uv, x) = apply_word(u, apply_word(v, x))`. The empty word
    /// is the identity.
    pub fn apply_word(&self, w: &Word, x: &Point) -> Result<Point> {
        if x.dim() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: x.dim() });
        }
        let mut y = x.clone();
        for &l in w.letters().iter().rev() {
            if l as usize >= self.maps.len() {
                return Err(Error::invalid(format!(
                    "word letter {} exceeds the {} maps",
                    l + 1,
                    self.maps.len()
                )));
            }
            y = self.maps[l as usize].apply(&y);
        }
        Ok(y)
    }
}

/// Applies the composition `f_w` to a point (see [`IfsSystem::apply_word`]).
pub fn compose(system: &IfsSystem, w: &Word, x: &Point) -> Result<Point> {
    system.apply_word(w, x)
}

/// Per-level image distances of one pair under all compositions.
///
/// `levels[k]` is `max over words w of length k of d(f_w(x), f_w(y))`;
/// `argmax_top` is the lexicographic rank of a maximizing word at the top
/// level. Computed by expanding images level by level (prepending each map),
/// which visits every word exactly once in lexicographic order.
pub(crate) struct PairLevels {
    pub levels: Vec<f64>,
    pub argmax_top: usize,
}

pub(crate) fn pair_levels(system: &IfsSystem, x: &Point, y: &Point, depth: usize) -> PairLevels {
    let m = system.map_count();
    let mut img_x = vec![x.clone()];
    let mut img_y = vec![y.clone()];
    let mut levels = Vec::with_capacity(depth + 1);
    levels.push(dist(x, y));
    let mut argmax_top = 0usize;
    for _ in 1..=depth {
        let mut nx = Vec::with_capacity(img_x.len() * m);
        let mut ny = Vec::with_capacity(img_y.len() * m);
        for i in 0..m {
            for p in &img_x {
                nx.push(system.maps[i].apply(p));
            }
            for p in &img_y {
                ny.push(system.maps[i].apply(p));
            }
        }
        img_x = nx;
        img_y = ny;
        let mut level_max = f64::NEG_INFINITY;
        let mut arg = 0usize;
        for (r, (a, b)) in img_x.iter().zip(&img_y).enumerate() {
            let d = dist(a, b);
            if d > level_max {
                level_max = d;
                arg = r;
            }
        }
        levels.push(level_max);
        argmax_top = arg;
    }
    PairLevels { levels, argmax_top }
}

/// Report of a sampled contraction check.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    /// Smallest `phi(max over short compositions) - max over depth-p
    /// compositions` seen; negative values beyond `tol` mean failure.
    pub worst_margin: f64,
    pub pairs_checked: usize,
    /// Worst pair when the check failed.
    pub witness: Option<VerifyWitness>,
}

/// A sampled pair violating (or minimizing the margin of) the contraction
/// condition, with the maximizing depth-`p` word.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyWitness {
    pub x: Point,
    pub y: Point,
    pub lhs: f64,
    pub rhs: f64,
    pub word: Word,
}

/// Samples `n_pairs` point pairs (cloud members and random convex
/// combinations of them) and checks the depth-`p` contraction condition on
/// each: `max_{|w| = p} d(f_w x, f_w y) <= phi(max_{|v| < p} d(f_v x, f_v y))`.
///
/// Returns the worst margin over all pairs; the check fails when some pair's
/// left side exceeds its right side by more than `tol`, and the report then
/// carries the worst pair and its maximizing word. Sampling is driven by a
/// fixed portable generator, so a given seed always checks the same pairs.
pub fn verify_phi_max(
    system: &IfsSystem,
    domain: &PointCloud,
    n_pairs: usize,
    seed: u64,
    tol: f64,
) -> Result<VerifyReport> {
    if domain.dim() != system.dim() {
        return Err(Error::DimMismatch { expected: system.dim(), got: domain.dim() });
    }
    if n_pairs == 0 {
        return Err(Error::invalid("verification needs n_pairs >= 1"));
    }
    if !(tol >= 0.0) {
        return Err(Error::invalid("verification tolerance must be >= 0"));
    }
    let pts = domain.points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_margin = f64::INFINITY;
    let mut witness: Option<VerifyWitness> = None;
    let mut checked = 0usize;
    let mut attempts = 0usize;
    let max_attempts = n_pairs.saturating_mul(100).max(1000);
    while checked < n_pairs {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::invalid(
                "could not sample distinct point pairs from the domain (is it a single point?)",
            ));
        }
        let (x, y) = if checked % 2 == 0 {
            let i = rng.random_range(0..pts.len());
            let j = rng.random_range(0..pts.len());
            (pts[i].clone(), pts[j].clone())
        } else {
            (convex_combo(pts, &mut rng), convex_combo(pts, &mut rng))
        };
        if dist(&x, &y) == 0.0 {
            continue;
        }
        let p = system.depth_p();
        let lv = pair_levels(system, &x, &y, p);
        let lhs = lv.levels[p];
        let short_max =
            numeric::max_finite(lv.levels[..p].iter().copied()).expect("levels nonempty");
        let rhs = system.phi().eval(short_max);
        let margin = rhs - lhs;
        if margin < worst_margin {
            worst_margin = margin;
            witness = Some(VerifyWitness {
                x: x.clone(),
                y: y.clone(),
                lhs,
                rhs,
                word: word_from_rank(system.map_count(), p, lv.argmax_top),
            });
        }
        checked += 1;
    }
    let passed = worst_margin >= -tol;
    Ok(VerifyReport {
        passed,
        worst_margin,
        pairs_checked: checked,
        witness: if passed { None } else { witness },
    })
}

pub(crate) fn convex_combo(pts: &[Point], rng: &mut ChaCha8Rng) -> Point {
    let i = rng.random_range(0..pts.len());
    let j = rng.random_range(0..pts.len());
    let t: f64 = rng.random();
    let coords = pts[i]
        .coords()
        .iter()
        .zip(pts[j].coords())
        .map(|(a, b)| a + t * (b - a))
        .collect();
    Point::new(coords).expect("convex combination of finite points is finite")
}

/// One application of the fractal operator: the union of the map images of
/// the cloud, deduplicated. Images are produced map by map in map order, and
/// within a map in cloud order, so the result is deterministic.
pub fn fractal_step(system: &IfsSystem, cloud: &PointCloud) -> Result<PointCloud> {
    if cloud.dim() != system.dim() {
        return Err(Error::DimMismatch { expected: system.dim(), got: cloud.dim() });
    }
    let m = system.map_count();
    let pts = cloud.points();
    let images: Vec<Point> = (0..m * pts.len())
        .into_par_iter()
        .map(|k| system.maps[k / pts.len()].apply(&pts[k % pts.len()]))
        .collect();
    PointCloud::new(images)
}

/// Result of the Picard iteration of the fractal operator.
#[derive(Clone, Debug, Serialize)]
pub struct AttractorRun {
    pub cloud: PointCloud,
    /// Hausdorff distances between consecutive iterates, one per step taken.
    pub trace: Vec<f64>,
    pub converged: bool,
    pub steps: usize,
    /// Last observed per-step contraction ratio `trace[k] / trace[k-1]`, the
    /// empirical geometric factor relating the stopping rule to the true
    /// error; reported, never assumed.
    pub est_ratio: Option<f64>,
}

/// Iterates [`fractal_step`] from `seed` until consecutive clouds are within
/// `tol` in Hausdorff distance or `max_iter` steps have been taken. A run
/// that exhausts its budget is returned with `converged = false` and the
/// full trace — hitting the budget is an outcome, not an error.
pub fn attractor(
    system: &IfsSystem,
    seed_cloud: &PointCloud,
    tol: f64,
    max_iter: usize,
) -> Result<AttractorRun> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid("attractor tolerance must be positive and finite"));
    }
    if max_iter == 0 {
        return Err(Error::invalid("attractor needs max_iter >= 1"));
    }
    let mut cloud = PointCloud::new(seed_cloud.points().to_vec())?;
    let mut trace = Vec::new();
    let mut converged = false;
    for _ in 0..max_iter {
        let next = fractal_step(system, &cloud)?;
        let h = hausdorff(&next, &cloud)?;
        trace.push(h);
        cloud = next;
        if h <= tol {
            converged = true;
            break;
        }
    }
    let est_ratio = if trace.len() >= 2 {
        let a = trace[trace.len() - 2];
        let b = trace[trace.len() - 1];
        if a > 0.0 {
            Some(b / a)
        } else {
            None
        }
    } else {
        None
    };
    let steps = trace.len();
    Ok(AttractorRun { cloud, trace, converged, steps, est_ratio })
}

/// A truncated absorbing hull and its forward-invariance defect.
#[derive(Clone, Debug, Serialize)]
pub struct HullResult {
    pub cloud: PointCloud,
    /// `max over q in fractal_step(cloud) of dist(q, cloud)`: how far one
    /// more application of the operator escapes the hull.
    pub defect: f64,
}

/// Builds the truncated hull `attractor ∪ supp ∪ F(supp) ∪ ... ∪ F^N(supp)`
/// that absorbs the forward orbit of a starting set, and reports how far the
/// next image escapes it. The defect shrinks as `n_levels` grows because
/// deep images accumulate near the attractor, which is invariant.
pub fn absorbing_hull(
    system: &IfsSystem,
    attractor_cloud: &PointCloud,
    start_supp: &PointCloud,
    n_levels: usize,
) -> Result<HullResult> {
    let mut hull = attractor_cloud.union(start_supp)?;
    let mut cur = start_supp.clone();
    for _ in 0..n_levels {
        cur = fractal_step(system, &cur)?;
        hull = hull.union(&cur)?;
    }
    let image = fractal_step(system, &hull)?;
    let defect = image
        .points()
        .par_iter()
        .map(|q| hull.dist_to(q).expect("dims match"))
        .reduce(|| 0.0, f64::max);
    Ok(HullResult { cloud: hull, defect })
}

/// Standard example systems used across tests and documentation.
pub mod presets {
    use super::*;

    /// Cantor middle-thirds system: `x/3` and `x/3 + 2/3` with equal
    /// probabilities, depth 1, linear comparison `t/3`.
    pub fn cantor_thirds() -> IfsSystem {
        IfsSystem::new(
            vec![
                MapSpec::affine_1d(1.0 / 3.0, 0.0).unwrap(),
                MapSpec::affine_1d(1.0 / 3.0, 2.0 / 3.0).unwrap(),
            ],
            vec![0.5, 0.5],
            ComparisonFn::linear(1.0 / 3.0).unwrap(),
            1,
        )
        .unwrap()
    }

    /// Binary halves system: `x/2` and `x/2 + 1/2` with equal probabilities,
    /// depth 1, linear comparison `t/2`. Its attractor is `[0, 1]` and its
    /// invariant measure is the uniform measure there.
    pub fn binary_halves() -> IfsSystem {
        IfsSystem::new(
            vec![
                MapSpec::affine_1d(0.5, 0.0).unwrap(),
                MapSpec::affine_1d(0.5, 0.5).unwrap(),
            ],
            vec![0.5, 0.5],
            ComparisonFn::linear(0.5).unwrap(),
            1,
        )
        .unwrap()
    }

    /// The swap-and-scale matrix `[[0, 2], [0.1, 0]]`: it expands one axis,
    /// but its square is `0.2 I`, so compositions contract only at depth 2.
    pub fn depth_two_matrix() -> Vec<Vec<f64>> {
        vec![vec![0.0, 2.0], vec![0.1, 0.0]]
    }

    /// Single-map 2D system built on [`depth_two_matrix`] with depth `p`,
    /// linear comparison `t/5`. Admissible at `p = 2`, refutable at `p = 1`.
    pub fn depth_two_single(p: usize) -> IfsSystem {
        IfsSystem::new(
            vec![MapSpec::affine(depth_two_matrix(), vec![0.0, 0.0]).unwrap()],
            vec![1.0],
            ComparisonFn::linear(0.2).unwrap(),
            p,
        )
        .unwrap()
    }

    /// Two-map 2D system: both maps share [`depth_two_matrix`], with offsets
    /// `(0, 0)` and `(1, 0)`; depth 2, linear comparison `t/5`.
    pub fn depth_two_pair() -> IfsSystem {
        IfsSystem::new(
            vec![
                MapSpec::affine(depth_two_matrix(), vec![0.0, 0.0]).unwrap(),
                MapSpec::affine(depth_two_matrix(), vec![1.0, 0.0]).unwrap(),
            ],
            vec![0.5, 0.5],
            ComparisonFn::linear(0.2).unwrap(),
            2,
        )
        .unwrap()
    }
}
