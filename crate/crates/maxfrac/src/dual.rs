//! The dual operator on test functions, oscillation, and the contraction
//! profile.
//!
//! Where the Markov operator pushes measures forward, its dual pulls test
//! functions back: `(B g)(x) = sum_i p_i * g(f_i(x))`. Iterating expands into
//! a word sum, `(B^n g)(x) = sum over words w of length n of p_w * g(f_w(x))`
//! — [`dual_iterate`] computes exactly that by streaming enumeration, and
//! [`dual_apply`] builds the operator tower one level at a time; the two must
//! agree to within accumulated rounding.
//!
//! Two diagnostics quantify the collapse of dual iterates toward a constant:
//! [`oscillation`] measures `sup |g(x) - g(y)|` over pairs at distance at
//! most epsilon, and [`contraction_profile`] estimates the scale profile
//! `a_n = sup over pairs (d <= eps) of max over words of length n of
//! d(f_w x, f_w y)`, checking on every sampled pair the recursion
//! `a_{n+p} <= phi(max(a_n, ..., a_{n+p-1}))` and the envelope
//! `a_{pk+j} <= phi^[k](max(a_1, ..., a_p))` that force geometric-style
//! decay. Both inequalities are exact statements about real numbers; the
//! checks allow only [`INEQUALITY_ETA`] of forward rounding error.

use crate::error::{Error, Result};
use crate::geometry::{dist, Point, PointCloud};
use crate::numeric;
use crate::system::{convex_combo, pair_levels, IfsSystem};
use crate::words;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Allowance for floating-point forward error when checking inequalities
/// that hold exactly in real arithmetic. Genuine violations of the
/// contraction inequalities are macroscopic; rounding noise is below 1e-12
/// on all supported scales.
pub const INEQUALITY_ETA: f64 = 1e-12;

/// Anything that can be evaluated at a point. `Sync` so evaluation can be
/// parallelized over point clouds.
pub trait Evaluable: Sync {
    /// Value at `x`. May panic when `x` has a dimension the function cannot
    /// handle; library entry points validate dimensions before evaluating.
    fn eval_point(&self, x: &Point) -> f64;
}

impl<F: Fn(&Point) -> f64 + Sync> Evaluable for F {
    fn eval_point(&self, x: &Point) -> f64 {
        self(x)
    }
}

/// A concrete test function: a coordinate projection, a polynomial in one
/// coordinate, or a Lipschitz envelope interpolating declared grid values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTestFunction", into = "RawTestFunction")]
pub enum TestFunction {
    /// `g(x) = x[axis]`.
    Coordinate { axis: usize },
    /// `g(x) = sum_k coeffs[k] * x[axis]^k` (Horner evaluation).
    Polynomial { axis: usize, coeffs: Vec<f64> },
    /// The largest `lip`-Lipschitz function lying at or below the declared
    /// grid values: `g(x) = max_j (values[j] - lip * d(x, grid_j))`. Equals
    /// `values[j]` at `grid_j` whenever the data is `lip`-Lipschitz, which
    /// the constructor requires.
    LipschitzGrid { grid: PointCloud, values: Vec<f64>, lip: f64 },
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum RawTestFunction {
    Coordinate {
        axis: usize,
    },
    Polynomial {
        #[serde(default)]
        axis: usize,
        coeffs: Vec<f64>,
    },
    LipschitzGrid {
        grid: PointCloud,
        values: Vec<f64>,
        lip: f64,
    },
}

impl From<TestFunction> for RawTestFunction {
    fn from(g: TestFunction) -> Self {
        match g {
            TestFunction::Coordinate { axis } => RawTestFunction::Coordinate { axis },
            TestFunction::Polynomial { axis, coeffs } => RawTestFunction::Polynomial { axis, coeffs },
            TestFunction::LipschitzGrid { grid, values, lip } => {
                RawTestFunction::LipschitzGrid { grid, values, lip }
            }
        }
    }
}

impl TryFrom<RawTestFunction> for TestFunction {
    type Error = Error;
    fn try_from(raw: RawTestFunction) -> Result<Self> {
        match raw {
            RawTestFunction::Coordinate { axis } => Ok(TestFunction::Coordinate { axis }),
            RawTestFunction::Polynomial { axis, coeffs } => TestFunction::polynomial_on_axis(axis, coeffs),
            RawTestFunction::LipschitzGrid { grid, values, lip } => {
                TestFunction::lipschitz_grid(grid, values, lip)
            }
        }
    }
}

impl TestFunction {
    pub fn coordinate(axis: usize) -> Self {
        TestFunction::Coordinate { axis }
    }

    /// Polynomial in the first coordinate, `coeffs[k]` the coefficient of
    /// `t^k`.
    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        Self::polynomial_on_axis(0, coeffs)
    }

    pub fn polynomial_on_axis(axis: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("a polynomial needs at least one coefficient"));
        }
        if !coeffs.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficient"));
        }
        Ok(TestFunction::Polynomial { axis, coeffs })
    }

    /// Builds a Lipschitz envelope from grid data. The declared constant
    /// must dominate the data: `|values[i] - values[j]| <= lip * d_ij` on
    /// every grid pair.
    pub fn lipschitz_grid(grid: PointCloud, values: Vec<f64>, lip: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "lipschitz_grid needs one value per grid point ({} points, {} values)",
                grid.len(),
                values.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("lipschitz_grid value"));
        }
        if !(lip.is_finite() && lip >= 0.0) {
            return Err(Error::invalid("lipschitz_grid constant must be finite and >= 0"));
        }
        let pts = grid.points();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let d = dist(&pts[i], &pts[j]);
                if (values[i] - values[j]).abs() > lip * d {
                    return Err(Error::invalid(format!(
                        "grid values violate the declared Lipschitz constant at pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(TestFunction::LipschitzGrid { grid, values, lip })
    }

    pub fn eval(&self, x: &Point) -> f64 {
        match self {
            TestFunction::Coordinate { axis } => x.coords()[*axis],
            TestFunction::Polynomial { axis, coeffs } => {
                let t = x.coords()[*axis];
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
            }
            TestFunction::LipschitzGrid { grid, values, lip } => {
                assert_eq!(x.dim(), grid.dim(), "lipschitz_grid evaluated in the wrong dimension");
                grid.points()
                    .iter()
                    .zip(values)
                    .map(|(g, v)| v - lip * dist(x, g))
                    .fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }
}

impl Evaluable for TestFunction {
    fn eval_point(&self, x: &Point) -> f64 {
        self.eval(x)
    }
}

/// One application of the dual operator: evaluates
/// `sum_i p_i * inner(f_i(x))` (compensated, in map order) on demand.
pub struct DualApplied<'a> {
    system: &'a IfsSystem,
    inner: Box<dyn Evaluable + 'a>,
}

impl Evaluable for DualApplied<'_> {
    fn eval_point(&self, x: &Point) -> f64 {
        numeric::sum(
            self.system
                .probs()
                .iter()
                .enumerate()
                .map(|(i, &p)| p * self.inner.eval_point(&self.system.apply_map(i, x))),
        )
    }
}

/// Wraps `g` in one layer of the dual operator.
pub fn dual_apply<'a>(system: &'a IfsSystem, g: Box<dyn Evaluable + 'a>) -> DualApplied<'a> {
    DualApplied { system, inner: g }
}

/// The `n`-fold dual-operator tower over `g`; `n = 0` returns `g` itself.
/// Each evaluation costs `m^n` map applications.
pub fn dual_apply_n<'a>(
    system: &'a IfsSystem,
    g: Box<dyn Evaluable + 'a>,
    n: usize,
) -> Box<dyn Evaluable + 'a> {
    let mut tower = g;
    for _ in 0..n {
        tower = Box::new(DualApplied { system, inner: tower });
    }
    tower
}

/// Evaluates the `n`-fold dual iterate at `x` by streaming over all words of
/// length `n` in lexicographic order: `sum_w p_w * g(f_w(x))`, compensated.
/// Agrees with the [`dual_apply_n`] tower to within accumulated rounding.
pub fn dual_iterate<G: Evaluable + ?Sized>(
    system: &IfsSystem,
    g: &G,
    n: usize,
    x: &Point,
) -> Result<f64> {
    if x.dim() != system.dim() {
        return Err(Error::DimMismatch { expected: system.dim(), got: x.dim() });
    }
    let probs = system.probs();
    let mut acc = numeric::Accumulator::new();
    words::for_each_word(system.map_count(), n, |letters| {
        let mut y = x.clone();
        for &l in letters.iter().rev() {
            y = system.apply_map(l as usize, &y);
        }
        let mut p_w = 1.0;
        for &l in letters {
            p_w *= probs[l as usize];
        }
        acc.add(p_w * g.eval_point(&y));
    })?;
    Ok(acc.total())
}

/// Range of one dual iterate over an evaluation cloud.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnvelopeRow {
    pub n: usize,
    pub sup: f64,
    pub inf: f64,
}

/// Evaluates `B^n g` at every cloud point for `n = 0..=n_max` and returns
/// the per-level sup and inf. Each point's word images are expanded level by
/// level, so the whole table costs about twice the top level alone. On an
/// (approximately) forward-invariant cloud the sup row is non-increasing and
/// the inf row non-decreasing, and both converge to the same constant.
pub fn dual_envelope<G: Evaluable + ?Sized>(
    system: &IfsSystem,
    g: &G,
    cloud: &PointCloud,
    n_max: usize,
) -> Result<Vec<EnvelopeRow>> {
    if cloud.dim() != system.dim() {
        return Err(Error::DimMismatch { expected: system.dim(), got: cloud.dim() });
    }
    let m = system.map_count();
    words::level_count(m, n_max)?;
    let probs = system.probs();
    let per_point: Vec<Vec<f64>> = cloud
        .points()
        .par_iter()
        .map(|x| {
            let mut imgs = vec![x.clone()];
            let mut weights = vec![1.0f64];
            let mut vals = Vec::with_capacity(n_max + 1);
            vals.push(g.eval_point(x));
            for _ in 1..=n_max {
                let mut next_imgs = Vec::with_capacity(imgs.len() * m);
                let mut next_weights = Vec::with_capacity(weights.len() * m);
                for (i, &p) in probs.iter().enumerate() {
                    for (img, &w) in imgs.iter().zip(&weights) {
                        next_imgs.push(system.apply_map(i, img));
                        next_weights.push(p * w);
                    }
                }
                imgs = next_imgs;
                weights = next_weights;
                vals.push(numeric::sum(
                    imgs.iter().zip(&weights).map(|(img, &w)| w * g.eval_point(img)),
                ));
            }
            vals
        })
        .collect();
    Ok((0..=n_max)
        .map(|n| {
            let sup = per_point.iter().map(|v| v[n]).fold(f64::NEG_INFINITY, f64::max);
            let inf = per_point.iter().map(|v| v[n]).fold(f64::INFINITY, f64::min);
            EnvelopeRow { n, sup, inf }
        })
        .collect())
}

/// `sup |g(x) - g(y)|` over all domain pairs with `d(x, y) <= eps`:
/// the modulus of oscillation of `g` at scale `eps` on the cloud.
/// No qualifying pair means 0.
pub fn oscillation<G: Evaluable + ?Sized>(g: &G, domain: &PointCloud, eps: f64) -> Result<f64> {
    if !(eps >= 0.0) {
        return Err(Error::invalid("oscillation scale must be >= 0"));
    }
    let pts = domain.points();
    let vals: Vec<f64> = pts.iter().map(|p| g.eval_point(p)).collect();
    Ok(pts
        .par_iter()
        .enumerate()
        .map(|(i, xi)| {
            let mut local = 0.0f64;
            for j in (i + 1)..pts.len() {
                if dist(xi, &pts[j]) <= eps {
                    local = local.max((vals[i] - vals[j]).abs());
                }
            }
            local
        })
        .reduce(|| 0.0, f64::max))
}

/// Empirical contraction profile with per-pair inequality checks.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileResult {
    /// `a_hat[n]` = max over sampled pairs of the level-`n` image distance;
    /// `a_hat[0]` is the largest sampled pair distance (at most `eps`).
    /// A lower bound for the true profile.
    pub a_hat: Vec<f64>,
    /// `max(a_hat[1..=p])`, the seed of the decay envelope.
    pub m_hat: f64,
    /// Per level `n >= p`: the smallest over pairs of
    /// `phi(max(levels[n-p..n])) - levels[n]`; `None` below `n = p`.
    pub recursion_margins: Vec<Option<f64>>,
    /// Per level `n >= 1`: `phi^[k](m_hat) - a_hat[n]` with `k = (n-1)/p`;
    /// `None` at `n = 0`.
    pub envelope_margins: Vec<Option<f64>>,
    /// Count of (pair, level) recursion checks failing beyond
    /// [`INEQUALITY_ETA`].
    pub recursion_violations: usize,
    /// Count of (pair, level) envelope checks failing beyond
    /// [`INEQUALITY_ETA`].
    pub envelope_violations: usize,
    pub pairs_checked: usize,
    pub passed: bool,
}

/// Samples point pairs at distance at most `eps` (all domain index pairs
/// first, then random convex combinations until `n_pairs`, with a fixed
/// seed) and computes `a_hat[n]` = max over pairs of the worst level-`n`
/// image distance, `n <= n_max`. On every pair it checks the depth-`p`
/// recursion `levels[n+p] <= phi(max(levels[n..n+p]))` and the decay
/// envelope `levels[pk+j] <= phi^[k](m_hat)`, each up to
/// [`INEQUALITY_ETA`]; `passed` means zero violations of either.
pub fn contraction_profile(
    system: &IfsSystem,
    domain: &PointCloud,
    eps: f64,
    n_max: usize,
    n_pairs: usize,
    seed: u64,
) -> Result<ProfileResult> {
    if domain.dim() != system.dim() {
        return Err(Error::DimMismatch { expected: system.dim(), got: domain.dim() });
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid("profile scale eps must be positive and finite"));
    }
    if n_max == 0 {
        return Err(Error::invalid("profile needs n_max >= 1"));
    }
    if n_pairs == 0 {
        return Err(Error::invalid("profile needs n_pairs >= 1"));
    }
    words::level_count(system.map_count(), n_max)?;

    let pts = domain.points();
    let mut pairs: Vec<(Point, Point)> = Vec::new();
    'indexed: for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = dist(&pts[i], &pts[j]);
            if d > 0.0 && d <= eps {
                pairs.push((pts[i].clone(), pts[j].clone()));
                if pairs.len() == n_pairs {
                    break 'indexed;
                }
            }
        }
    }
    if pairs.len() < n_pairs {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max_attempts = n_pairs.saturating_mul(100).max(1000);
        let mut attempts = 0usize;
        while pairs.len() < n_pairs && attempts < max_attempts {
            attempts += 1;
            let x = convex_combo(pts, &mut rng);
            let y = convex_combo(pts, &mut rng);
            let d = dist(&x, &y);
            if d > 0.0 && d <= eps {
                pairs.push((x, y));
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::invalid("no point pair with positive distance <= eps was found"));
    }

    let p = system.depth_p();
    let all_levels: Vec<Vec<f64>> = pairs
        .par_iter()
        .map(|(x, y)| pair_levels(system, x, y, n_max).levels)
        .collect();

    let a_hat: Vec<f64> = (0..=n_max)
        .map(|n| all_levels.iter().map(|lv| lv[n]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let m_hat = a_hat[1..=p.min(n_max)].iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut recursion_margins: Vec<Option<f64>> = vec![None; n_max + 1];
    let mut recursion_violations = 0usize;
    for n in p..=n_max {
        let mut level_min = f64::INFINITY;
        for lv in &all_levels {
            let short_max =
                lv[n - p..n].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let margin = system.phi().eval(short_max) - lv[n];
            if margin < -INEQUALITY_ETA {
                recursion_violations += 1;
            }
            level_min = level_min.min(margin);
        }
        recursion_margins[n] = Some(level_min);
    }

    let mut envelope_margins: Vec<Option<f64>> = vec![None; n_max + 1];
    let mut envelope_violations = 0usize;
    for n in 1..=n_max {
        let k = (n - 1) / p;
        let bound = system.phi().iterate(m_hat, k);
        for lv in &all_levels {
            if lv[n] - bound > INEQUALITY_ETA {
                envelope_violations += 1;
            }
        }
        envelope_margins[n] = Some(bound - a_hat[n]);
    }

    Ok(ProfileResult {
        a_hat,
        m_hat,
        recursion_margins,
        envelope_margins,
        recursion_violations,
        envelope_violations,
        pairs_checked: pairs.len(),
        passed: recursion_violations == 0 && envelope_violations == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{integrate, markov_iterate, DiscreteMeasure, PrunePolicy};
    use crate::system::presets::{cantor_thirds, depth_two_single};
    use approx::assert_abs_diff_eq;

    fn coord() -> TestFunction {
        TestFunction::coordinate(0)
    }

    #[test]
    fn constant_functions_are_fixed_by_the_dual_operator() {
        let s = cantor_thirds();
        let one = TestFunction::polynomial(vec![1.0]).unwrap();
        let applied = dual_apply(&s, Box::new(one.clone()));
        assert_eq!(applied.eval_point(&Point::scalar(0.2)), 1.0);
        assert_eq!(dual_iterate(&s, &one, 5, &Point::scalar(0.7)).unwrap(), 1.0);
    }

    #[test]
    fn cantor_dual_of_the_coordinate_at_zero() {
        let s = cantor_thirds();
        let applied = dual_apply(&s, Box::new(coord()));
        assert_eq!(applied.eval_point(&Point::scalar(0.0)), 1.0 / 3.0);
    }

    #[test]
    fn dual_apply_is_linear() {
        let s = cantor_thirds();
        let g = coord();
        let h = TestFunction::polynomial(vec![0.5, 0.0, 1.0]).unwrap();
        let combo = |x: &Point| 2.0 * g.eval(x) + h.eval(x);
        let lhs = dual_apply(&s, Box::new(combo));
        let bg = dual_apply(&s, Box::new(g.clone()));
        let bh = dual_apply(&s, Box::new(h.clone()));
        for t in [0.0, 0.3, 0.8, 1.0] {
            let x = Point::scalar(t);
            let rhs = 2.0 * bg.eval_point(&x) + bh.eval_point(&x);
            assert_abs_diff_eq!(lhs.eval_point(&x), rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn dual_iterate_matches_the_closed_form_on_cantor() {
        // B g(x) = x/3 + 1/3 for g = coordinate, so B^n g(0) = (1 - 3^-n)/2
        let s = cantor_thirds();
        let zero = Point::scalar(0.0);
        assert_eq!(dual_iterate(&s, &coord(), 0, &Point::scalar(0.3)).unwrap(), 0.3);
        for n in 1..=6 {
            let expect = (1.0 - 3.0f64.powi(-(n as i32))) / 2.0;
            let got = dual_iterate(&s, &coord(), n, &zero).unwrap();
            assert_abs_diff_eq!(got, expect, epsilon = 1e-12);
        }
        let got = dual_iterate(&s, &coord(), 4, &zero).unwrap();
        assert_abs_diff_eq!(got, 40.0 / 81.0, epsilon = 1e-12);
    }

    #[test]
    fn dual_iterate_agrees_with_the_apply_tower() {
        let s = cantor_thirds();
        let g = TestFunction::polynomial(vec![0.3, -1.0, 2.0]).unwrap();
        for t in [0.0, 0.4, 1.0] {
            let x = Point::scalar(t);
            let streamed = dual_iterate(&s, &g, 3, &x).unwrap();
            let tower = dual_apply_n(&s, Box::new(g.clone()), 3);
            assert_abs_diff_eq!(streamed, tower.eval_point(&x), epsilon = 1e-10);
        }
    }

    #[test]
    fn dual_and_markov_sides_of_the_duality_agree() {
        let s = cantor_thirds();
        let g = TestFunction::polynomial(vec![0.0, 0.0, 1.0]).unwrap();
        let nu = DiscreteMeasure::new(vec![
            (Point::scalar(0.0), 0.5),
            (Point::scalar(1.0), 0.5),
        ])
        .unwrap();
        for n in 0..=4 {
            let forward = markov_iterate(&s, &nu, n, &PrunePolicy::None).unwrap();
            let lhs = integrate(&g, &forward.measure);
            let rhs = numeric::sum(
                nu.atoms()
                    .iter()
                    .map(|(x, w)| w * dual_iterate(&s, &g, n, x).unwrap()),
            );
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        }
    }

    #[test]
    fn envelope_rows_collapse_monotonically_on_cantor() {
        let s = cantor_thirds();
        let cloud = PointCloud::from_scalars(&[0.0, 1.0]).unwrap();
        let rows = dual_envelope(&s, &coord(), &cloud, 6).unwrap();
        assert_eq!(rows.len(), 7);
        for row in &rows {
            let scale = 3.0f64.powi(-(row.n as i32));
            assert_abs_diff_eq!(row.sup, (1.0 + scale) / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(row.inf, (1.0 - scale) / 2.0, epsilon = 1e-12);
        }
        for w in rows.windows(2) {
            assert!(w[1].sup <= w[0].sup);
            assert!(w[1].inf >= w[0].inf);
        }
    }

    #[test]
    fn envelope_respects_the_enumeration_cap() {
        let s = cantor_thirds();
        let cloud = PointCloud::from_scalars(&[0.0, 1.0]).unwrap();
        assert!(matches!(
            dual_envelope(&s, &coord(), &cloud, 25),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn oscillation_examples() {
        let constant = TestFunction::polynomial(vec![4.0]).unwrap();
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let cloud = PointCloud::from_scalars(&grid).unwrap();
        assert_eq!(oscillation(&constant, &cloud, 0.5).unwrap(), 0.0);

        assert_eq!(oscillation(&coord(), &cloud, 0.1).unwrap(), 0.1);
        let small = oscillation(&coord(), &cloud, 0.05).unwrap();
        assert!(small <= 0.1);

        // eps at least the diameter sees the full range of g
        let tri = PointCloud::from_scalars(&[0.0, 0.25, 1.0]).unwrap();
        let g = TestFunction::polynomial(vec![-1.0, 2.0]).unwrap();
        assert_eq!(oscillation(&g, &tri, 2.0).unwrap(), 2.0);

        assert!(oscillation(&coord(), &tri, -0.1).is_err());
    }

    #[test]
    fn cantor_profile_hits_the_endpoint_scales() {
        let s = cantor_thirds();
        let domain = PointCloud::from_scalars(&[0.0, 1.0]).unwrap();
        let prof = contraction_profile(&s, &domain, 1.0, 6, 40, 3).unwrap();
        assert_eq!(prof.pairs_checked, 40);
        assert_eq!(prof.a_hat[0], 1.0);
        assert_abs_diff_eq!(prof.a_hat[3], 1.0 / 27.0, epsilon = 1e-12);
        assert_eq!(prof.recursion_violations, 0);
        assert_eq!(prof.envelope_violations, 0);
        assert!(prof.passed);
        assert_abs_diff_eq!(prof.m_hat, 1.0 / 3.0, epsilon = 1e-15);
        for n in 1..=6 {
            assert!(prof.recursion_margins[n].unwrap() >= -INEQUALITY_ETA);
            assert!(prof.envelope_margins[n].unwrap() >= -INEQUALITY_ETA);
        }
    }

    #[test]
    fn matrix_profile_shows_expansion_then_decay() {
        let s = depth_two_single(2);
        let domain = PointCloud::new(vec![
            Point::pair(0.0, 0.0),
            Point::pair(0.0, 1.0),
            Point::pair(1.0, 0.0),
        ])
        .unwrap();
        let prof = contraction_profile(&s, &domain, 1.0, 6, 8, 5).unwrap();
        assert_eq!(prof.a_hat[1], 2.0);
        assert_eq!(prof.a_hat[2], 0.2);
        assert_abs_diff_eq!(prof.a_hat[4], 0.04, epsilon = 1e-15);
        assert_eq!(prof.m_hat, 2.0);
        assert!(prof.passed, "recursion/envelope checks must pass at the declared depth");
    }

    #[test]
    fn matrix_profile_at_understated_depth_reports_violations() {
        // the same map declared with depth 1 contradicts phi at the first level
        let s = depth_two_single(1);
        let domain = PointCloud::new(vec![
            Point::pair(0.0, 0.0),
            Point::pair(0.0, 1.0),
            Point::pair(1.0, 0.0),
        ])
        .unwrap();
        let prof = contraction_profile(&s, &domain, 1.0, 4, 8, 5).unwrap();
        assert!(prof.recursion_violations > 0);
        assert!(!prof.passed);
        assert!(prof.recursion_margins[1].unwrap() <= -(2.0 - 0.2) + 1e-9);
    }

    #[test]
    fn profile_without_admissible_pairs_is_an_error() {
        let s = cantor_thirds();
        let single = PointCloud::from_scalars(&[0.5]).unwrap();
        assert!(contraction_profile(&s, &single, 1.0, 3, 10, 0).is_err());
    }

    #[test]
    fn lipschitz_grid_interpolates_and_validates() {
        let grid = PointCloud::from_scalars(&[0.0, 1.0]).unwrap();
        // declared constant strictly above the empirical one: restriction
        // identity is exact
        let g = TestFunction::lipschitz_grid(grid.clone(), vec![0.0, 2.0], 2.5).unwrap();
        assert_eq!(g.eval(&Point::scalar(0.0)), 0.0);
        assert_eq!(g.eval(&Point::scalar(1.0)), 2.0);
        // far field decays at slope lip from the dominating node
        assert_eq!(g.eval(&Point::scalar(3.0)), -3.0);

        assert!(TestFunction::lipschitz_grid(grid, vec![0.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn test_function_json_roundtrip_and_validation() {
        let g = TestFunction::polynomial(vec![1.0, 2.0]).unwrap();
        let js = serde_json::to_string(&g).unwrap();
        assert_eq!(js, r#"{"type":"polynomial","axis":0,"coeffs":[1.0,2.0]}"#);
        let back: TestFunction = serde_json::from_str(&js).unwrap();
        assert_eq!(g, back);
        // axis defaults to 0 when missing
        let parsed: TestFunction =
            serde_json::from_str(r#"{"type":"polynomial","coeffs":[1.0,2.0]}"#).unwrap();
        assert_eq!(parsed, g);
        assert!(serde_json::from_str::<TestFunction>(
            r#"{"type":"polynomial","coeffs":[]}"#
        )
        .is_err());
        // lipschitz data inconsistent with the declared constant is rejected
        // at parse time
        assert!(serde_json::from_str::<TestFunction>(
            r#"{"type":"lipschitz_grid","grid":[[0.0],[1.0]],"values":[0.0,5.0],"lip":1.0}"#
        )
        .is_err());
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let s = cantor_thirds();
        let x2 = Point::pair(0.0, 0.0);
        assert!(dual_iterate(&s, &coord(), 2, &x2).is_err());
        let cloud2 = PointCloud::new(vec![Point::pair(0.0, 0.0), Point::pair(1.0, 1.0)]).unwrap();
        assert!(dual_envelope(&s, &coord(), &cloud2, 2).is_err());
        assert!(contraction_profile(&s, &cloud2, 1.0, 2, 4, 0).is_err());
    }
}
