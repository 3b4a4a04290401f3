//! Adaptive Simpson quadrature with Richardson correction.

use crate::error::{Error, Result};

/// Absolute tolerance used for pressure-potential integrals.
pub const POTENTIAL_TOL: f64 = 1e-12;

/// Maximum bisection depth.
pub const MAX_DEPTH: u32 = 40;

struct Panel {
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

/// Integrates `f` over `[low, high]` to absolute tolerance `tol`.
///
/// Reversed bounds are allowed and flip the sign. Fails if any panel still
/// misses its share of the tolerance at `max_depth`, or if the integrand
/// produces a non-finite value.
pub fn adaptive_simpson<F>(f: F, low: f64, high: f64, tol: f64, max_depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if low == high {
        return Ok(0.0);
    }
    if high < low {
        return adaptive_simpson(f, high, low, tol, max_depth).map(|v| -v);
    }
    let m = 0.5 * (low + high);
    let (fa, fm, fb) = (f(low), f(m), f(high));
    let whole = (high - low) * (fa + 4.0 * fm + fb) / 6.0;
    let panel = Panel {
        a: low,
        m,
        b: high,
        fa,
        fm,
        fb,
        whole,
    };
    let value = refine(&f, panel, tol, max_depth).ok_or(Error::Quadrature { low, high })?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Quadrature { low, high })
    }
}

fn refine<F>(f: &F, p: Panel, tol: f64, depth: u32) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let lm = 0.5 * (p.a + p.m);
    let rm = 0.5 * (p.m + p.b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (p.m - p.a) * (p.fa + 4.0 * flm + p.fm) / 6.0;
    let right = (p.b - p.m) * (p.fm + 4.0 * frm + p.fb) / 6.0;
    let delta = left + right - p.whole;
    if !delta.is_finite() {
        return None;
    }
    if delta.abs() <= 15.0 * tol {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let l = Panel {
        a: p.a,
        m: lm,
        b: p.m,
        fa: p.fa,
        fm: flm,
        fb: p.fm,
        whole: left,
    };
    let r = Panel {
        a: p.m,
        m: rm,
        b: p.b,
        fa: p.fm,
        fm: frm,
        fb: p.fb,
        whole: right,
    };
    Some(refine(f, l, 0.5 * tol, depth - 1)? + refine(f, r, 0.5 * tol, depth - 1)?)
}
