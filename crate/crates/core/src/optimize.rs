//! Bracketed one-dimensional minimization.

use crate::error::{Error, Result};

/// Result of a 1-D minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
///
/// Stops once the bracket is narrower than `tol`. The best interior probe and
/// both end points are compared at the end, with ties going to the smaller `x`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Minimum> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::InvalidState(format!("invalid bracket [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidState(format!("tolerance must be positive, got {tol}")));
    }
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while hi - lo > tol && iterations < 500 {
        iterations += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let mut best = Minimum {
        x: x1,
        value: f1,
        iterations,
    };
    for (x, v) in [(x2, f2), (a, f(a)), (b, f(b))] {
        if v < best.value || (v == best.value && x < best.x) {
            best = Minimum {
                x,
                value: v,
                iterations,
            };
        }
    }
    Ok(best)
}

/// Scans `steps + 1` evenly spaced points, then refines around the lowest one
/// by golden section. Handles functions that are unimodal only near the optimum.
pub fn scan_then_golden<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, steps: usize, tol: f64) -> Result<Minimum> {
    if steps == 0 {
        return golden_section(f, a, b, tol);
    }
    let h = (b - a) / steps as f64;
    let mut best_i = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..=steps {
        let v = f(a + h * i as f64);
        // strict comparison keeps the smallest x among ties
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = a + h * best_i.saturating_sub(1) as f64;
    let hi = (a + h * (best_i + 1) as f64).min(b);
    golden_section(f, lo, hi, tol)
}
