//! Small numerical helpers shared across modules.

use crate::error::{Error, Result};

/// Neumaier compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Result of a bracketed root search.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub evaluations: usize,
}

/// Root of an increasing function `f` on `[lo, hi]` with `f(lo) < 0 < f(hi)`.
///
/// Bisects until the bracket is narrower than `switch_width` (relative to its
/// midpoint), then finishes with Illinois-modified regula falsi, which is a
/// secant iteration that never leaves the bracket.
pub fn bracketed_root<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    switch_width: f64,
    rel_tol: f64,
    label: usize,
) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    const MAX_ITER: usize = 200;
    let mut flo = f(lo)?;
    let mut fhi = f(hi)?;
    let mut evaluations = 2;
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::Bracket { label, lo, hi });
    }
    while (hi - lo) > switch_width * 0.5 * (hi + lo).abs() {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        evaluations += 1;
        if fm < 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        if evaluations > MAX_ITER {
            return Err(Error::RootNoConvergence { label, iterations: evaluations });
        }
    }
    // Illinois: halve the retained end's value whenever the same end survives twice.
    let mut side = 0i8;
    let mut x = lo;
    for _ in 0..MAX_ITER {
        x = (lo * fhi - hi * flo) / (fhi - flo);
        let fx = f(x)?;
        evaluations += 1;
        if fx == 0.0 {
            return Ok(Root { x, evaluations });
        }
        if fx < 0.0 {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
        if (hi - lo) <= rel_tol * x.abs() {
            return Ok(Root { x: 0.5 * (lo + hi), evaluations });
        }
        let step_small = (x - lo).abs().min((hi - x).abs()) <= 0.25 * rel_tol * x.abs();
        if step_small && fx.abs() <= f64::EPSILON * 64.0 {
            return Ok(Root { x, evaluations });
        }
    }
    let _ = x;
    Err(Error::RootNoConvergence { label, iterations: evaluations })
}
