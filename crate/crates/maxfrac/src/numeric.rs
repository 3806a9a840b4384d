//! Small numeric helpers: compensated summation and float ordering.
//!
//! Sums of weights and integrals feed tolerance checks as tight as 1e-10, so
//! plain left-to-right accumulation over 1e5 terms is not safe. All mass
//! totals and integrals in this crate go through [`sum`], a Neumaier
//! compensated sum evaluated strictly in iteration order — deterministic and
//! accurate to a few ulps regardless of length.

/// Neumaier (improved Kahan) compensated sum, in iteration order.
pub fn sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = Accumulator::new();
    for v in values {
        acc.add(v);
    }
    acc.total()
}

/// Streaming form of [`sum`] for callers that produce terms one at a time.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Accumulator {
    s: f64,
    comp: f64,
}

impl Accumulator {
    pub(crate) fn new() -> Self {
        Accumulator { s: 0.0, comp: 0.0 }
    }

    pub(crate) fn add(&mut self, v: f64) {
        let t = self.s + v;
        if self.s.abs() >= v.abs() {
            self.comp += (self.s - t) + v;
        } else {
            self.comp += (v - t) + self.s;
        }
        self.s = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.s + self.comp
    }
}

/// Maximum of an iterator of finite floats; `None` when empty.
pub fn max_finite<I: IntoIterator<Item = f64>>(values: I) -> Option<f64> {
    values.into_iter().fold(None, |acc, v| match acc {
        None => Some(v),
        Some(a) => Some(if v > a { v } else { a }),
    })
}
