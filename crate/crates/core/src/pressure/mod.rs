//! Barotropic pressure laws and the pressure potential.
//!
//! The potential is `P(ρ) = ρ ∫_{ρ*}^{ρ} p(r)/r² dr`; changing the reference
//! density `ρ*` shifts it by a linear function of `ρ`.

mod interp;
pub mod quadrature;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use interp::MonotoneCubic;
use quadrature::{adaptive_simpson, MAX_DEPTH, POTENTIAL_TOL};

/// Minimum number of samples accepted for a tabulated law.
pub const MIN_TABULATED_SAMPLES: usize = 4;

/// Reference density `ρ*` of the pressure potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialContext {
    pub rho_star: f64,
}

impl PotentialContext {
    pub fn new(rho_star: f64) -> Result<Self> {
        if rho_star.is_finite() && rho_star > 0.0 {
            Ok(Self { rho_star })
        } else {
            Err(Error::InvalidParameters(format!(
                "reference density rho_star must be finite and > 0, got {rho_star}"
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PressureLaw {
    /// `p(ρ) = K ρ^γ`.
    Polytropic {
        k: f64,
        gamma: f64,
    },
    Tabulated(TabulatedLaw),
}

/// Monotone cubic interpolant of `(ρ, p)` samples, evaluable on the closed
/// sample hull only.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedLaw {
    curve: MonotoneCubic,
    /// `∫_{x_0}^{x_k} p(r)/r² dr` at every knot.
    cumulative: Vec<f64>,
}

impl TabulatedLaw {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < MIN_TABULATED_SAMPLES {
            return Err(Error::InvalidLaw(format!(
                "tabulated law needs at least {MIN_TABULATED_SAMPLES} samples, got {}",
                samples.len()
            )));
        }
        if let Some((i, s)) = samples
            .iter()
            .enumerate()
            .find(|(_, s)| !(s.0.is_finite() && s.1.is_finite() && s.0 > 0.0 && s.1 > 0.0))
        {
            return Err(Error::InvalidLaw(format!(
                "sample {i} = ({}, {}) must have finite positive density and pressure",
                s.0, s.1
            )));
        }
        let curve = MonotoneCubic::new(samples)?;
        let knots = curve.knots();
        let piece_tol = POTENTIAL_TOL / (knots.len() - 1) as f64;
        let mut cumulative = Vec::with_capacity(knots.len());
        let mut acc = 0.0;
        cumulative.push(acc);
        for w in knots.windows(2) {
            acc += adaptive_simpson(
                |r| curve.value(r) / (r * r),
                w[0],
                w[1],
                piece_tol,
                MAX_DEPTH,
            )?;
            cumulative.push(acc);
        }
        Ok(Self { curve, cumulative })
    }

    pub fn hull(&self) -> (f64, f64) {
        self.curve.hull()
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    /// `∫_{x_0}^{rho} p(r)/r² dr`.
    fn primitive(&self, rho: f64) -> Result<f64> {
        let k = self.curve.interval(rho);
        let knot = self.curve.knots()[k];
        let tail = adaptive_simpson(
            |r| self.curve.value(r) / (r * r),
            knot,
            rho,
            0.5 * POTENTIAL_TOL,
            MAX_DEPTH,
        )?;
        Ok(self.cumulative[k] + tail)
    }
}

impl PressureLaw {
    pub fn polytropic(k: f64, gamma: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if !(k.is_finite() && k > 0.0) {
            problems.push(format!("coefficient K must be finite and > 0, got {k}"));
        }
        if !(gamma.is_finite() && gamma >= 1.0) {
            problems.push(format!(
                "exponent gamma must be finite and >= 1, got {gamma}"
            ));
        }
        if problems.is_empty() {
            Ok(Self::Polytropic { k, gamma })
        } else {
            Err(Error::InvalidLaw(problems.join("; ")))
        }
    }

    pub fn tabulated(samples: &[(f64, f64)]) -> Result<Self> {
        TabulatedLaw::new(samples).map(Self::Tabulated)
    }

    /// Loads a two-column `(ρ, p)` CSV; a non-numeric first row is treated as a header.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let csv_err = |source| Error::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(csv_err)?;
        let mut samples = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(csv_err)?;
            if record.len() != 2 {
                return Err(Error::InvalidLaw(format!(
                    "{}: row {} has {} columns, expected 2",
                    path.display(),
                    row + 1,
                    record.len()
                )));
            }
            let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
            match parsed {
                (Ok(rho), Ok(p)) => samples.push((rho, p)),
                _ if row == 0 => continue,
                _ => {
                    return Err(Error::InvalidLaw(format!(
                        "{}: row {} is not numeric",
                        path.display(),
                        row + 1
                    )))
                }
            }
        }
        Self::tabulated(&samples)
    }

    /// Closed evaluable density range.
    pub fn range(&self) -> (f64, f64) {
        match self {
            Self::Polytropic { .. } => (0.0, f64::INFINITY),
            Self::Tabulated(t) => t.hull(),
        }
    }

    pub fn check_density(&self, rho: f64) -> Result<()> {
        let (low, high) = self.range();
        let ok = match self {
            Self::Polytropic { .. } => rho.is_finite() && rho > 0.0,
            Self::Tabulated(_) => rho >= low && rho <= high,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain { rho, low, high })
        }
    }

    /// `p(ρ)`.
    pub fn pressure(&self, rho: f64) -> Result<f64> {
        self.check_density(rho)?;
        Ok(match self {
            Self::Polytropic { k, gamma } => k * rho.powf(*gamma),
            Self::Tabulated(t) => t.curve.value(rho),
        })
    }

    /// `p′(ρ)`.
    pub fn dpressure(&self, rho: f64) -> Result<f64> {
        self.check_density(rho)?;
        Ok(match self {
            Self::Polytropic { k, gamma } => k * gamma * rho.powf(gamma - 1.0),
            Self::Tabulated(t) => t.curve.derivative(rho),
        })
    }

    /// Pressure potential `P(ρ; ρ*)`.
    pub fn potential(&self, rho: f64, ctx: &PotentialContext) -> Result<f64> {
        self.check_density(rho)?;
        self.check_density(ctx.rho_star)?;
        let rs = ctx.rho_star;
        match self {
            Self::Polytropic { k, gamma } => {
                if *gamma == 1.0 {
                    Ok(k * rho * (rho / rs).ln())
                } else {
                    let g1 = gamma - 1.0;
                    Ok(k * (rho.powf(*gamma) - rho * rs.powf(g1)) / g1)
                }
            }
            Self::Tabulated(t) => Ok(rho * (t.primitive(rho)? - t.primitive(rs)?)),
        }
    }

    /// `P′(ρ) = (P(ρ) + p(ρ)) / ρ`.
    pub fn dpotential(&self, rho: f64, ctx: &PotentialContext) -> Result<f64> {
        Ok((self.potential(rho, ctx)? + self.pressure(rho)?) / rho)
    }
}

impl fmt::Display for PressureLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Polytropic { k, gamma } => write!(f, "polytropic(K={k}, gamma={gamma})"),
            Self::Tabulated(t) => {
                let (lo, hi) = t.hull();
                write!(f, "tabulated(samples={}, hull=[{lo}, {hi}])", t.len())
            }
        }
    }
}
