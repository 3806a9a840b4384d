//! Comparison functions: the gauges `phi` that drive the max-type
//! contraction condition.
//!
//! A comparison function is an increasing `phi: [0, inf) -> [0, inf)` whose
//! iterates vanish pointwise: `phi^[k](t) -> 0` for every `t >= 0`. These two
//! properties force `phi(0) = 0` and `phi(t) < t` for `t > 0`, which is what
//! the fixed-point arguments actually consume. Three concrete shapes are
//! provided:
//!
//! * `linear`: `t -> c * t` with `0 <= c < 1` (`c = 1` is rejected: its
//!   iterates do not vanish);
//! * `rational`: `t -> t / (1 + t)`, whose k-th iterate has the closed form
//!   `t / (1 + k t)` — a standard example that is not linearly bounded away
//!   from the diagonal;
//! * `tabulated`: piecewise-linear through `(0,0)` and user breakpoints,
//!   strictly sub-diagonal at the breakpoints, extended beyond the last
//!   breakpoint with the final segment's slope (which must be `< 1`).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[serde(try_from = "RawComparison")]
pub enum ComparisonFn {
    Linear { c: f64 },
    Rational,
    Tabulated { points: Vec<(f64, f64)> },
}

/// Unvalidated mirror used to funnel deserialization through the constructors.
#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum RawComparison {
    Linear { c: f64 },
    Rational,
    Tabulated { points: Vec<(f64, f64)> },
}

impl TryFrom<RawComparison> for ComparisonFn {
    type Error = Error;
    fn try_from(raw: RawComparison) -> Result<Self> {
        match raw {
            RawComparison::Linear { c } => ComparisonFn::linear(c),
            RawComparison::Rational => Ok(ComparisonFn::Rational),
            RawComparison::Tabulated { points } => ComparisonFn::tabulated(points),
        }
    }
}

impl ComparisonFn {
    /// `t -> c t`. Requires `0 <= c < 1`; in particular `c = 1` is rejected.
    pub fn linear(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::NonFinite("linear coefficient"));
        }
        if !(0.0..1.0).contains(&c) {
            return Err(Error::invalid(format!(
                "linear comparison coefficient must satisfy 0 <= c < 1, got {c}"
            )));
        }
        Ok(ComparisonFn::Linear { c })
    }

    /// `t -> t / (1 + t)`.
    pub fn rational() -> Self {
        ComparisonFn::Rational
    }

    /// Piecewise-linear comparison function through `(0, 0)`.
    ///
    /// Breakpoints must have strictly increasing abscissae `t_k > 0`,
    /// nondecreasing values, and `v_k < t_k` at every breakpoint. Beyond the
    /// last breakpoint the final segment's slope is held, and that slope must
    /// be `< 1` so iterates from any starting value decay into the table.
    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("tabulated comparison needs breakpoints"));
        }
        for &(t, v) in &points {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::NonFinite("tabulated breakpoint"));
            }
            if t <= 0.0 {
                return Err(Error::invalid("breakpoint abscissae must be positive"));
            }
            if v < 0.0 {
                return Err(Error::invalid("breakpoint values must be nonnegative"));
            }
            if v >= t {
                return Err(Error::invalid(format!(
                    "breakpoint ({t}, {v}) is not strictly below the diagonal"
                )));
            }
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::invalid("breakpoint abscissae must be strictly increasing"));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::invalid("breakpoint values must be nondecreasing"));
            }
        }
        let (tl, vl) = points[points.len() - 1];
        let (tp, vp) = if points.len() >= 2 {
            points[points.len() - 2]
        } else {
            (0.0, 0.0)
        };
        let tail_slope = (vl - vp) / (tl - tp);
        if tail_slope >= 1.0 {
            return Err(Error::invalid(format!(
                "final segment slope must be < 1, got {tail_slope}"
            )));
        }
        Ok(ComparisonFn::Tabulated { points })
    }

    /// Evaluates `phi(t)`. Requires `t >= 0`.
    pub fn eval(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "comparison functions are defined on t >= 0, got {t}");
        match self {
            ComparisonFn::Linear { c } => c * t,
            ComparisonFn::Rational => t / (1.0 + t),
            ComparisonFn::Tabulated { points } => {
                let n = points.len();
                // segment [t_{k}, t_{k+1}) with the implicit leading (0, 0)
                if t == 0.0 {
                    return 0.0;
                }
                let (tl, vl) = points[n - 1];
                if t >= tl {
                    let (tp, vp) = if n >= 2 { points[n - 2] } else { (0.0, 0.0) };
                    let slope = (vl - vp) / (tl - tp);
                    return vl + slope * (t - tl);
                }
                let mut prev = (0.0, 0.0);
                for &(tk, vk) in points {
                    if t <= tk {
                        let (t0, v0) = prev;
                        return v0 + (vk - v0) * (t - t0) / (tk - t0);
                    }
                    prev = (tk, vk);
                }
                unreachable!("t < last breakpoint is handled in the loop");
            }
        }
    }

    /// k-th iterate `phi^[k](t)`; `k = 0` returns `t` unchanged.
    pub fn iterate(&self, t: f64, k: usize) -> f64 {
        let mut v = t;
        for _ in 0..k {
            v = self.eval(v);
        }
        v
    }
}

/// Outcome of [`check_comparison`].
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    /// Pairs `(s, t)` from the grid with `s <= t` but `phi(s) > phi(t)`.
    pub monotonicity_violations: Vec<(f64, f64)>,
    /// Grid values whose `k_max`-th iterate still exceeds `tol`.
    pub non_vanishing: Vec<f64>,
    /// Largest `k_max`-th iterate seen over the grid.
    pub max_final_iterate: f64,
    pub passed: bool,
}

/// Empirically checks the two defining properties of a comparison function
/// on a finite grid: monotonicity over all grid pairs, and decay of the
/// `k_max`-th iterate below `tol` at every grid value.
pub fn check_comparison(
    phi: &ComparisonFn,
    grid: &[f64],
    k_max: usize,
    tol: f64,
) -> Result<ComparisonReport> {
    if grid.is_empty() {
        return Err(Error::invalid("comparison check needs a nonempty grid"));
    }
    if grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::invalid("comparison check grid must be finite and >= 0"));
    }
    let mut monotonicity_violations = Vec::new();
    for i in 0..grid.len() {
        for j in 0..grid.len() {
            let (s, t) = (grid[i], grid[j]);
            if s <= t && phi.eval(s) > phi.eval(t) {
                monotonicity_violations.push((s, t));
            }
        }
    }
    let mut non_vanishing = Vec::new();
    let mut max_final_iterate = 0.0f64;
    for &t in grid {
        let v = phi.iterate(t, k_max);
        max_final_iterate = max_final_iterate.max(v);
        if v > tol {
            non_vanishing.push(t);
        }
    }
    let passed = monotonicity_violations.is_empty() && non_vanishing.is_empty();
    Ok(ComparisonReport {
        monotonicity_violations,
        non_vanishing,
        max_final_iterate,
        passed,
    })
}
