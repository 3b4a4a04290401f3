//! Monotone piecewise-cubic Hermite interpolation.
//!
//! Interior knot slopes are the harmonic mean of the adjacent secants and
//! end slopes equal the end secants. For strictly increasing data every
//! normalized slope lies in (0, 2], inside the Fritsch–Carlson box, so the
//! interpolant is C¹ with a strictly positive derivative on the whole hull.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// Builds the interpolant from at least two strictly increasing samples.
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidLaw("need at least two samples".into()));
        }
        let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) || !(w[1].1 > w[0].1) {
                return Err(Error::InvalidLaw(format!(
                    "samples {i} and {} are not strictly increasing in both columns",
                    i + 1
                )));
            }
        }
        let secants: Vec<f64> = xs
            .windows(2)
            .zip(ys.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect();
        let n = xs.len();
        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for k in 1..n - 1 {
            let (s0, s1) = (secants[k - 1], secants[k]);
            slopes[k] = 2.0 * s0 * s1 / (s0 + s1);
        }
        Ok(Self { xs, ys, slopes })
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn hull(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    /// Index `k` of the interval `[x_k, x_{k+1}]` holding `x` (last interval
    /// for the right end point). Caller guarantees `x` is in the hull.
    pub fn interval(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&xk| xk <= x);
        k.saturating_sub(1).min(self.xs.len() - 2)
    }

    pub fn value(&self, x: f64) -> f64 {
        let k = self.interval(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[k]
            + h10 * h * self.slopes[k]
            + h01 * self.ys[k + 1]
            + h11 * h * self.slopes[k + 1]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let k = self.interval(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let secant = (self.ys[k + 1] - self.ys[k]) / h;
        6.0 * (t - t2) * secant
            + (3.0 * t2 - 4.0 * t + 1.0) * self.slopes[k]
            + (3.0 * t2 - 2.0 * t) * self.slopes[k + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> MonotoneCubic {
        MonotoneCubic::new(&[(0.0, 0.0), (1.0, 1.0), (2.0, 1.1), (3.0, 5.0)]).unwrap()
    }

    #[test]
    fn reproduces_knots() {
        let c = cubic();
        for (x, y) in [(0.0, 0.0), (1.0, 1.0), (2.0, 1.1), (3.0, 5.0)] {
            assert!((c.value(x) - y).abs() < 1e-15);
        }
    }

    #[test]
    fn derivative_strictly_positive_with_flat_segment() {
        let c = cubic();
        for i in 0..=3000 {
            let x = 3.0 * i as f64 / 3000.0;
            assert!(c.derivative(x) > 0.0, "x = {x}");
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let c = cubic();
        let h = 1e-6;
        for x in [0.3, 0.9, 1.5, 2.2, 2.8] {
            let fd = (c.value(x + h) - c.value(x - h)) / (2.0 * h);
            assert!((fd - c.derivative(x)).abs() < 1e-7);
        }
    }

    #[test]
    fn linear_data_is_reproduced() {
        let c = MonotoneCubic::new(&[(1.0, 2.0), (2.0, 4.0), (4.0, 8.0)]).unwrap();
        assert!((c.value(3.0) - 6.0).abs() < 1e-14);
        assert!((c.derivative(3.5) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_monotone() {
        assert!(MonotoneCubic::new(&[(0.0, 1.0), (1.0, 1.0)]).is_err());
        assert!(MonotoneCubic::new(&[(0.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(MonotoneCubic::new(&[(0.0, 1.0)]).is_err());
    }
}
