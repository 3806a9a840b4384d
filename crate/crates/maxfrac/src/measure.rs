//! Discrete probability measures and the Markov operator of a system.
//!
//! A [`DiscreteMeasure`] is a finite convex combination of point masses;
//! atoms coalesce within [`DEDUP_TOL`](crate::geometry::DEDUP_TOL) at
//! construction (first-inserted representative keeps the location, weights
//! add) and the total mass must already be 1 within `1e-10` — nothing is
//! renormalized silently.
//!
//! The Markov operator of a system sends `mu` to `sum_i p_i * mu o f_i^{-1}`;
//! on discrete measures this is an exact pushforward: every atom `(x, w)`
//! spawns `(f_i(x), p_i * w)` for each map, in map-major order, followed by
//! coalescing ([`markov_step`]). Iterating it is the measure-side Picard
//! scheme; [`invariant_measure`] stops when consecutive iterates are within
//! `tol` in 1-Wasserstein distance. Optional pruning drops the lightest
//! atoms, never exceeding an explicit mass budget, and every run reports the
//! mass it actually dropped.
//!
//! [`chaos_game`] draws a single random orbit (maps chosen by the selection
//! probabilities) and returns the empirical measure of the samples after a
//! burn-in; with high probability it approximates the invariant measure.

use crate::dual::Evaluable;
use crate::error::{Error, Result};
use crate::geometry::{dedup_assign, Point, PointCloud, DEDUP_TOL};
use crate::numeric;
use crate::system::IfsSystem;
use crate::transport;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Hard cap on atom counts produced by Markov steps.
pub const ATOM_CAP: usize = 1 << 20;

/// A finitely supported probability measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct DiscreteMeasure {
    atoms: Vec<(Point, f64)>,
    dim: usize,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawMeasure {
    atoms: Vec<(Point, f64)>,
}

impl From<DiscreteMeasure> for RawMeasure {
    fn from(m: DiscreteMeasure) -> Self {
        RawMeasure { atoms: m.atoms }
    }
}

impl TryFrom<RawMeasure> for DiscreteMeasure {
    type Error = Error;
    fn try_from(raw: RawMeasure) -> Result<Self> {
        DiscreteMeasure::new(raw.atoms)
    }
}

impl DiscreteMeasure {
    /// Builds a measure from weighted points: coalesces atoms within the
    /// deduplication tolerance (weights add onto the first-inserted
    /// representative), requires every weight positive and the total within
    /// `1e-10` of 1.
    pub fn new(atoms: Vec<(Point, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("a measure needs at least one atom"));
        }
        let dim = atoms[0].0.dim();
        for (p, w) in &atoms {
            if p.dim() != dim {
                return Err(Error::DimMismatch { expected: dim, got: p.dim() });
            }
            if !w.is_finite() {
                return Err(Error::NonFinite("atom weight"));
            }
            if *w <= 0.0 {
                return Err(Error::invalid(format!("atom weights must be positive, got {w}")));
            }
        }
        let atoms = coalesce(atoms);
        let total = numeric::sum(atoms.iter().map(|(_, w)| *w));
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!(
                "atom weights must sum to 1 within 1e-10, got {total}"
            )));
        }
        Ok(DiscreteMeasure { atoms, dim })
    }

    /// The unit mass at a point.
    pub fn dirac(p: Point) -> Self {
        let dim = p.dim();
        DiscreteMeasure { atoms: vec![(p, 1.0)], dim }
    }

    /// Equal weights on the members of a cloud.
    pub fn uniform_on(cloud: &PointCloud) -> Self {
        let n = cloud.len();
        let w = 1.0 / n as f64;
        DiscreteMeasure {
            atoms: cloud.points().iter().map(|p| (p.clone(), w)).collect(),
            dim: cloud.dim(),
        }
    }

    pub fn atoms(&self) -> &[(Point, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Compensated total mass (1 up to a few ulps by construction).
    pub fn total_mass(&self) -> f64 {
        numeric::sum(self.atoms.iter().map(|(_, w)| *w))
    }

    /// The support as a point cloud, in atom order.
    pub fn support(&self) -> PointCloud {
        PointCloud::new(self.atoms.iter().map(|(p, _)| p.clone()).collect())
            .expect("measure support is a valid cloud")
    }
}

/// Coalesces atoms within the dedup tolerance; the first-inserted
/// representative keeps the location and absorbs the weights.
fn coalesce(atoms: Vec<(Point, f64)>) -> Vec<(Point, f64)> {
    let points: Vec<Point> = atoms.iter().map(|(p, _)| p.clone()).collect();
    let (kept, assign) = dedup_assign(&points, DEDUP_TOL);
    let mut out: Vec<(Point, f64)> = kept
        .iter()
        .map(|&i| (atoms[i].0.clone(), 0.0))
        .collect();
    for (i, (_, w)) in atoms.iter().enumerate() {
        out[assign[i]].1 += *w;
    }
    out
}

/// Atom-dropping policy for Markov iterations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PrunePolicy {
    /// Keep every atom.
    None,
    /// After each step, drop atoms lighter than `min_weight` (lightest
    /// first) as long as the cumulative dropped mass over the whole run
    /// stays within `max_dropped_mass`; then rebalance to total mass 1.
    Threshold { min_weight: f64, max_dropped_mass: f64 },
}

impl PrunePolicy {
    fn budget(&self) -> f64 {
        match self {
            PrunePolicy::None => 0.0,
            PrunePolicy::Threshold { max_dropped_mass, .. } => *max_dropped_mass,
        }
    }

    fn validate(&self) -> Result<()> {
        if let PrunePolicy::Threshold { min_weight, max_dropped_mass } = self {
            if !(min_weight.is_finite() && *min_weight >= 0.0) {
                return Err(Error::invalid("prune min_weight must be finite and >= 0"));
            }
            if !(max_dropped_mass.is_finite() && *max_dropped_mass >= 0.0 && *max_dropped_mass < 1.0)
            {
                return Err(Error::invalid("prune max_dropped_mass must lie in [0, 1)"));
            }
        }
        Ok(())
    }
}

/// One Markov step with a step-local budget; returns the next measure and
/// the mass dropped by pruning (measured before rebalancing).
fn step_with_budget(
    system: &IfsSystem,
    mu: &DiscreteMeasure,
    policy: &PrunePolicy,
    budget_left: f64,
    cap: usize,
) -> Result<(DiscreteMeasure, f64)> {
    if mu.dim() != system.dim() {
        return Err(Error::DimMismatch { expected: system.dim(), got: mu.dim() });
    }
    let m = system.map_count();
    let candidates = m.saturating_mul(mu.len());
    if candidates > cap {
        return Err(Error::CapExceeded { what: "measure atoms", limit: cap, requested: candidates });
    }
    let mut pushed: Vec<(Point, f64)> = Vec::with_capacity(candidates);
    for (i, &p_i) in system.probs().iter().enumerate() {
        for (x, w) in mu.atoms() {
            pushed.push((system.apply_map(i, x), p_i * w));
        }
    }
    let mut atoms = coalesce(pushed);

    let mut dropped = 0.0;
    if let PrunePolicy::Threshold { min_weight, .. } = policy {
        // lightest first, ties by position, so the drop set is deterministic
        let mut order: Vec<usize> = (0..atoms.len()).collect();
        order.sort_by(|&a, &b| {
            atoms[a].1.partial_cmp(&atoms[b].1).expect("finite weights").then(a.cmp(&b))
        });
        let mut to_drop = vec![false; atoms.len()];
        let mut remaining = atoms.len();
        for &idx in &order {
            let w = atoms[idx].1;
            if w >= *min_weight || remaining == 1 {
                break;
            }
            if dropped + w > budget_left {
                break;
            }
            dropped += w;
            to_drop[idx] = true;
            remaining -= 1;
        }
        if dropped > 0.0 {
            let mut drop_flags = to_drop.iter();
            atoms.retain(|_| !*drop_flags.next().unwrap());
        }
    }

    let total = numeric::sum(atoms.iter().map(|(_, w)| *w));
    for (_, w) in &mut atoms {
        *w /= total;
    }
    Ok((DiscreteMeasure::new(atoms)?, dropped))
}

/// One application of the Markov operator: pushforward under every map
/// weighted by its selection probability, coalesced, optionally pruned
/// within the policy's full budget, and rebalanced to total mass 1.
/// Returns the next measure and the pruned mass.
pub fn markov_step(
    system: &IfsSystem,
    mu: &DiscreteMeasure,
    policy: &PrunePolicy,
) -> Result<(DiscreteMeasure, f64)> {
    policy.validate()?;
    step_with_budget(system, mu, policy, policy.budget(), ATOM_CAP)
}

/// Diagnostics of an `n`-fold Markov iteration.
#[derive(Clone, Debug, Serialize)]
pub struct MarkovRun {
    pub measure: DiscreteMeasure,
    pub steps: usize,
    /// Total mass dropped by pruning across all steps (within the budget).
    pub pruned_mass: f64,
    /// Largest atom count seen among the iterates.
    pub peak_atoms: usize,
}

/// Applies [`markov_step`] `n` times, spreading the pruning budget across
/// the whole run (the cumulative dropped mass never exceeds the policy's
/// `max_dropped_mass`).
pub fn markov_iterate(
    system: &IfsSystem,
    nu: &DiscreteMeasure,
    n: usize,
    policy: &PrunePolicy,
) -> Result<MarkovRun> {
    markov_iterate_capped(system, nu, n, policy, ATOM_CAP)
}

fn markov_iterate_capped(
    system: &IfsSystem,
    nu: &DiscreteMeasure,
    n: usize,
    policy: &PrunePolicy,
    cap: usize,
) -> Result<MarkovRun> {
    policy.validate()?;
    let mut measure = nu.clone();
    let mut pruned_mass = 0.0;
    let mut peak_atoms = measure.len();
    for _ in 0..n {
        let budget_left = (policy.budget() - pruned_mass).max(0.0);
        let (next, dropped) = step_with_budget(system, &measure, policy, budget_left, cap)?;
        pruned_mass += dropped;
        peak_atoms = peak_atoms.max(next.len());
        measure = next;
    }
    Ok(MarkovRun { measure, steps: n, pruned_mass, peak_atoms })
}

/// 1-Wasserstein distance between measures, dispatching on dimension: the
/// exact CDF method in 1D (no atom cap), the exact network solver otherwise.
/// Both routes are exact and are cross-checked against each other in 1D by
/// the test suites.
pub(crate) fn measure_distance(a: &DiscreteMeasure, b: &DiscreteMeasure) -> Result<f64> {
    if a.dim() == 1 && b.dim() == 1 {
        transport::wasserstein1_1d(a, b)
    } else {
        Ok(transport::wasserstein1(a, b)?.cost)
    }
}

/// Result of the measure-side Picard iteration.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantRun {
    pub measure: DiscreteMeasure,
    /// 1-Wasserstein distances between consecutive iterates.
    pub trace: Vec<f64>,
    pub converged: bool,
    pub steps: usize,
    pub pruned_mass: f64,
}

/// Iterates the Markov operator from `nu0` until consecutive iterates are
/// within `tol` in 1-Wasserstein distance or the budget runs out. Hitting
/// `max_iter` is reported (`converged = false`, full trace), not raised.
pub fn invariant_measure(
    system: &IfsSystem,
    nu0: &DiscreteMeasure,
    tol: f64,
    max_iter: usize,
    policy: &PrunePolicy,
) -> Result<InvariantRun> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid("invariant-measure tolerance must be positive and finite"));
    }
    if max_iter == 0 {
        return Err(Error::invalid("invariant measure needs max_iter >= 1"));
    }
    policy.validate()?;
    let mut measure = nu0.clone();
    let mut trace = Vec::new();
    let mut pruned_mass = 0.0;
    let mut converged = false;
    for _ in 0..max_iter {
        let budget_left = (policy.budget() - pruned_mass).max(0.0);
        let (next, dropped) = step_with_budget(system, &measure, policy, budget_left, ATOM_CAP)?;
        pruned_mass += dropped;
        let step = measure_distance(&next, &measure)?;
        trace.push(step);
        measure = next;
        if step <= tol {
            converged = true;
            break;
        }
    }
    let steps = trace.len();
    Ok(InvariantRun { measure, trace, converged, steps, pruned_mass })
}

/// Runs the chaos game: a single orbit `x_{k+1} = f_{i_k}(x_k)` with map
/// indices drawn from the selection probabilities, discarding `burn_in`
/// initial steps and returning the empirical measure of the next
/// `n_samples` states (weights are exact sample counts over `n_samples`).
/// Fixed seed, fixed orbit: the result is fully deterministic.
pub fn chaos_game(
    system: &IfsSystem,
    x0: &Point,
    n_samples: usize,
    burn_in: usize,
    seed: u64,
) -> Result<DiscreteMeasure> {
    if x0.dim() != system.dim() {
        return Err(Error::DimMismatch { expected: system.dim(), got: x0.dim() });
    }
    if n_samples == 0 {
        return Err(Error::invalid("chaos game needs n_samples >= 1"));
    }
    let probs = system.probs();
    let mut cumulative: Vec<f64> = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cumulative.push(acc);
    }
    // guard the last bucket against rounding in the partial sums
    *cumulative.last_mut().expect("at least one map") = f64::INFINITY;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = x0.clone();
    let mut samples: Vec<Point> = Vec::with_capacity(n_samples);
    for step in 0..burn_in + n_samples {
        let u: f64 = rng.random();
        let i = cumulative.partition_point(|&c| c <= u);
        x = system.apply_map(i, &x);
        if step >= burn_in {
            samples.push(x.clone());
        }
    }
    let (kept, assign) = dedup_assign(&samples, DEDUP_TOL);
    let mut counts = vec![0usize; kept.len()];
    for &a in &assign {
        counts[a] += 1;
    }
    let atoms: Vec<(Point, f64)> = kept
        .iter()
        .zip(&counts)
        .map(|(&i, &c)| (samples[i].clone(), c as f64 / n_samples as f64))
        .collect();
    DiscreteMeasure::new(atoms)
}

/// Integral of a test function against a measure: the weighted sum of its
/// values over the atoms, compensated, in atom order.
pub fn integrate<G: Evaluable + ?Sized>(g: &G, mu: &DiscreteMeasure) -> f64 {
    numeric::sum(mu.atoms().iter().map(|(x, w)| w * g.eval_point(x)))
}

/// Per-axis first and second moments of a measure.
#[derive(Clone, Debug, Serialize)]
pub struct Moments {
    pub mean: Vec<f64>,
    pub second_raw: Vec<f64>,
    pub variance: Vec<f64>,
}

pub fn moments(mu: &DiscreteMeasure) -> Moments {
    let d = mu.dim();
    let mut mean = Vec::with_capacity(d);
    let mut second_raw = Vec::with_capacity(d);
    let mut variance = Vec::with_capacity(d);
    for axis in 0..d {
        let m1 = numeric::sum(mu.atoms().iter().map(|(x, w)| w * x.coords()[axis]));
        let m2 = numeric::sum(mu.atoms().iter().map(|(x, w)| w * x.coords()[axis] * x.coords()[axis]));
        mean.push(m1);
        second_raw.push(m2);
        variance.push(m2 - m1 * m1);
    }
    Moments { mean, second_raw, variance }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::ComparisonFn;
    use crate::system::presets::{binary_halves, cantor_thirds};
    use crate::system::{fractal_step, MapSpec};
    use approx::assert_abs_diff_eq;

    fn delta0() -> DiscreteMeasure {
        DiscreteMeasure::dirac(Point::scalar(0.0))
    }

    #[test]
    fn construction_coalesces_and_validates() {
        let m = DiscreteMeasure::new(vec![
            (Point::scalar(0.0), 0.25),
            (Point::scalar(0.0), 0.25),
            (Point::scalar(1.0), 0.5),
        ])
        .unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.atoms()[0].1, 0.5);
        assert!((m.total_mass() - 1.0).abs() < 1e-15);

        assert!(DiscreteMeasure::new(vec![]).is_err());
        assert!(DiscreteMeasure::new(vec![(Point::scalar(0.0), 0.5)]).is_err());
        assert!(DiscreteMeasure::new(vec![
            (Point::scalar(0.0), -0.5),
            (Point::scalar(1.0), 1.5)
        ])
        .is_err());
    }

    #[test]
    fn single_map_step_is_a_pure_pushforward() {
        let s = crate::system::IfsSystem::new(
            vec![MapSpec::affine_1d(0.5, 1.0).unwrap()],
            vec![1.0],
            ComparisonFn::linear(0.5).unwrap(),
            1,
        )
        .unwrap();
        let (next, dropped) = markov_step(&s, &DiscreteMeasure::dirac(Point::scalar(3.0)), &PrunePolicy::None).unwrap();
        assert_eq!(dropped, 0.0);
        assert_eq!(next.len(), 1);
        assert_eq!(next.atoms()[0].0.coords()[0], 2.5);
        assert_eq!(next.atoms()[0].1, 1.0);
    }

    #[test]
    fn cantor_step_from_a_dirac_splits_evenly() {
        let (next, _) = markov_step(&cantor_thirds(), &delta0(), &PrunePolicy::None).unwrap();
        assert_eq!(next.len(), 2);
        assert_eq!(next.atoms()[0].0.coords()[0], 0.0);
        assert_eq!(next.atoms()[0].1, 0.5);
        assert_abs_diff_eq!(next.atoms()[1].0.coords()[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(next.atoms()[1].1, 0.5);
    }

    #[test]
    fn iterate_support_matches_fractal_step_images() {
        let s = cantor_thirds();
        let run = markov_iterate(&s, &delta0(), 3, &PrunePolicy::None).unwrap();
        assert_eq!(run.measure.len(), 8);
        for (_, w) in run.measure.atoms() {
            assert_abs_diff_eq!(*w, 0.125, epsilon = 1e-15);
        }
        // support equals the three-fold image of the starting support
        let mut cloud = PointCloud::from_scalars(&[0.0]).unwrap();
        for _ in 0..3 {
            cloud = fractal_step(&s, &cloud).unwrap();
        }
        let supp = run.measure.support();
        assert_eq!(crate::geometry::hausdorff(&supp, &cloud).unwrap(), 0.0);
    }

    #[test]
    fn pruning_respects_threshold_and_budget() {
        let s = crate::system::IfsSystem::new(
            vec![
                MapSpec::affine_1d(0.5, 0.0).unwrap(),
                MapSpec::affine_1d(0.5, 0.5).unwrap(),
            ],
            vec![0.999, 0.001],
            ComparisonFn::linear(0.5).unwrap(),
            1,
        )
        .unwrap();
        // generous budget: the light atom goes
        let policy = PrunePolicy::Threshold { min_weight: 0.01, max_dropped_mass: 0.01 };
        let (pruned, dropped) = markov_step(&s, &delta0(), &policy).unwrap();
        assert_eq!(pruned.len(), 1);
        assert_abs_diff_eq!(dropped, 0.001, epsilon = 1e-15);
        assert_abs_diff_eq!(pruned.total_mass(), 1.0, epsilon = 1e-12);

        // budget below the atom's weight: nothing may be dropped
        let tight = PrunePolicy::Threshold { min_weight: 0.01, max_dropped_mass: 0.0005 };
        let (kept, dropped) = markov_step(&s, &delta0(), &tight).unwrap();
        assert_eq!(kept.len(), 2);
        assert_eq!(dropped, 0.0);
    }

    #[test]
    fn iterate_budget_is_cumulative_across_steps() {
        let s = crate::system::IfsSystem::new(
            vec![
                MapSpec::affine_1d(0.5, 0.0).unwrap(),
                MapSpec::affine_1d(0.5, 0.5).unwrap(),
            ],
            vec![0.999, 0.001],
            ComparisonFn::linear(0.5).unwrap(),
            1,
        )
        .unwrap();
        let policy = PrunePolicy::Threshold { min_weight: 0.01, max_dropped_mass: 0.0025 };
        let run = markov_iterate(&s, &delta0(), 10, &PrunePolicy::None).unwrap();
        assert!(run.pruned_mass == 0.0 && run.peak_atoms > 100);
        let run = markov_iterate(&s, &delta0(), 10, &policy).unwrap();
        assert!(run.pruned_mass <= 0.0025 + 1e-15, "pruned {}", run.pruned_mass);
        assert!(run.pruned_mass > 0.0);
        assert!(run.peak_atoms < 100);
    }

    #[test]
    fn atom_cap_is_enforced() {
        let s = binary_halves();
        // seed at an irrational-ish point so images never coalesce
        let nu = DiscreteMeasure::dirac(Point::scalar(0.123456789));
        let err = markov_iterate_capped(&s, &nu, 10, &PrunePolicy::None, 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn invariant_measure_cantor_converges_with_decaying_trace() {
        let run = invariant_measure(&cantor_thirds(), &delta0(), 1e-3, 40, &PrunePolicy::None).unwrap();
        assert!(run.converged);
        let mom = moments(&run.measure);
        assert_abs_diff_eq!(mom.mean[0], 0.5, epsilon = 5e-3);
        for w in run.trace.windows(2) {
            assert!(w[1] < w[0], "W1 trace must decrease: {:?}", run.trace);
        }
    }

    #[test]
    fn invariant_measure_accepts_off_attractor_starts() {
        let run = invariant_measure(
            &cantor_thirds(),
            &DiscreteMeasure::dirac(Point::scalar(2.0)),
            1e-3,
            40,
            &PrunePolicy::None,
        )
        .unwrap();
        assert!(run.converged);
        // the limit lives on [0, 1]: all atoms must have entered it
        for (x, _) in run.measure.atoms() {
            let v = x.coords()[0];
            assert!((-0.01..=1.01).contains(&v), "atom at {v}");
        }
    }

    #[test]
    fn invariant_measure_reports_budget_exhaustion() {
        let run = invariant_measure(&cantor_thirds(), &delta0(), 1e-12, 3, &PrunePolicy::None).unwrap();
        assert!(!run.converged);
        assert_eq!(run.trace.len(), 3);
    }

    #[test]
    fn chaos_game_is_deterministic_per_seed() {
        let s = cantor_thirds();
        let a = chaos_game(&s, &Point::scalar(0.3), 2000, 50, 9).unwrap();
        let b = chaos_game(&s, &Point::scalar(0.3), 2000, 50, 9).unwrap();
        assert_eq!(a, b);
        let c = chaos_game(&s, &Point::scalar(0.3), 2000, 50, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn chaos_game_mean_approaches_the_invariant_mean() {
        let emp = chaos_game(&cantor_thirds(), &Point::scalar(0.0), 20_000, 100, 4).unwrap();
        let mom = moments(&emp);
        assert_abs_diff_eq!(mom.mean[0], 0.5, epsilon = 0.02);
        assert_abs_diff_eq!(emp.total_mass(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn integrate_and_moments_are_exact_on_small_measures() {
        let mu = DiscreteMeasure::new(vec![
            (Point::scalar(0.0), 0.25),
            (Point::scalar(1.0), 0.75),
        ])
        .unwrap();
        let mom = moments(&mu);
        assert_eq!(mom.mean[0], 0.75);
        assert_eq!(mom.second_raw[0], 0.75);
        assert_abs_diff_eq!(mom.variance[0], 0.1875, epsilon = 1e-16);
    }

    #[test]
    fn measure_json_roundtrip() {
        let mu = DiscreteMeasure::new(vec![
            (Point::scalar(0.0), 0.25),
            (Point::scalar(1.0), 0.75),
        ])
        .unwrap();
        let js = serde_json::to_string(&mu).unwrap();
        assert_eq!(js, r#"{"atoms":[[[0.0],0.25],[[1.0],0.75]]}"#);
        let back: DiscreteMeasure = serde_json::from_str(&js).unwrap();
        assert_eq!(mu, back);
        // weights must still sum to 1 at parse time
        assert!(serde_json::from_str::<DiscreteMeasure>(r#"{"atoms":[[[0.0],0.5]]}"#).is_err());
    }
}
