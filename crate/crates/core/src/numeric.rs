//! Small numeric utilities: compensated summation, Simpson quadrature,
//! bracketed root finding for convex exponents.

use crate::error::{Error, Result};

/// Neumaier-compensated accumulator for f64 sums with cancellation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, v: f64) {
        let t = self.s + v;
        if self.s.abs() >= v.abs() {
            self.c += (self.s - t) + v;
        } else {
            self.c += (v - t) + self.s;
        }
        self.s = t;
    }

    pub fn total(&self) -> f64 {
        self.s + self.c
    }
}

/// Composite Simpson rule with `steps` subintervals (rounded up to even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, steps: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let n = steps.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let mut acc = NeumaierSum::default();
    acc.add(f(a));
    acc.add(f(b));
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(w * f(a + k as f64 * h));
    }
    acc.total() * h / 3.0
}

/// Adaptive Simpson with absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn simpson3(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        min_width: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson3(fa, flm, fm, a, m);
        let right = simpson3(fm, frm, fb, m, b);
        let delta = left + right - whole;
        // the width floor stops refinement chasing roundoff noise
        if delta.abs() <= 15.0 * tol || b - a <= min_width {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(Error::Numeric(format!(
                "adaptive quadrature did not converge on [{a}, {b}] (residual {delta:.3e})"
            )));
        }
        Ok(recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, min_width, depth - 1)?
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, min_width, depth - 1)?)
    }

    if b <= a {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson3(fa, fm, fb, a, b);
    let min_width = (b - a) * 1e-12;
    recurse(f, a, b, fa, fm, fb, whole, tol, min_width, 48)
}

/// Largest root of `f(x) = target` on `[lower, infinity)` for an eventually
/// increasing `f`. The bracket upper end is doubled until it clears the
/// target, then bisection narrows it and Newton polishes (tolerance 1e-14
/// absolute on the argument, relative for large roots).
pub fn largest_root<F, D>(f: F, df: D, target: f64, lower: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut lo = lower;
    let mut hi = if lower > 0.0 { 2.0 * lower } else { 1.0 };
    let mut expansions = 0u32;
    while f(hi) <= target {
        lo = hi;
        hi *= 2.0;
        expansions += 1;
        if expansions > 200 || !hi.is_finite() {
            return Err(Error::Numeric(format!(
                "root bracketing failed: f({hi:.3e}) = {:.6e} never exceeded target {target:.6e}",
                f(hi)
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.max(1.0) {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let d = df(x);
        if d == 0.0 {
            break;
        }
        let step = (f(x) - target) / d;
        let next = x - step;
        if !next.is_finite() {
            break;
        }
        x = next;
        if step.abs() <= 1e-14 * x.abs().max(1.0) {
            break;
        }
    }
    Ok(x)
}
