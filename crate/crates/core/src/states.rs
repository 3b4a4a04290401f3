//! Piecewise-constant fan states and their matrix algebra.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pressure::{PotentialContext, PressureLaw};

/// Symmetric traceless 2×2 matrix `[[u11, u12], [u12, -u11]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TracelessSym2 {
    pub u11: f64,
    pub u12: f64,
}

impl TracelessSym2 {
    pub fn new(u11: f64, u12: f64) -> Self {
        Self { u11, u12 }
    }

    pub fn u22(&self) -> f64 {
        -self.u11
    }
}

/// General symmetric 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sym2 {
    pub m11: f64,
    pub m12: f64,
    pub m22: f64,
}

impl Sym2 {
    pub fn new(m11: f64, m12: f64, m22: f64) -> Self {
        Self { m11, m12, m22 }
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m12
    }

    /// Larger eigenvalue, closed form.
    pub fn lambda_max(&self) -> f64 {
        let half_gap = 0.5 * (self.m11 - self.m22);
        0.5 * (self.m11 + self.m22) + half_gap.hypot(self.m12)
    }

    /// The trace/determinant form of `λ_max < 0`.
    pub fn is_negative_definite(&self) -> bool {
        self.trace() < 0.0 && self.det() > 0.0
    }
}

/// One region's subsolution tuple `(ρ, m, U, q, F)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FanState {
    pub rho: f64,
    pub m: [f64; 2],
    #[serde(rename = "U")]
    pub u: TracelessSym2,
    pub q: f64,
    #[serde(rename = "F")]
    pub f: [f64; 2],
}

impl FanState {
    /// Reflection `x ↦ -x`: flips `m1`, `u12` and `F1`.
    pub fn x_reflection(&self) -> Self {
        Self {
            rho: self.rho,
            m: [-self.m[0], self.m[1]],
            u: TracelessSym2::new(self.u.u11, -self.u.u12),
            q: self.q,
            f: [-self.f[0], self.f[1]],
        }
    }

    /// State of a Riemann half-plane with density `rho` and momentum `m`:
    /// `q = |m|²/2ρ + p`, `U = m⊗m/ρ + (p − q)I`, `F = (q + P) m/ρ`.
    pub fn riemann(
        rho: f64,
        m: [f64; 2],
        law: &PressureLaw,
        ctx: &PotentialContext,
    ) -> Result<Self> {
        let p = law.pressure(rho)?;
        let pot = law.potential(rho, ctx)?;
        let q = (m[0] * m[0] + m[1] * m[1]) / (2.0 * rho) + p;
        // m1²/ρ + p − q, written so that tracelessness is exact.
        let u = TracelessSym2::new((m[0] * m[0] - m[1] * m[1]) / (2.0 * rho), m[0] * m[1] / rho);
        let scale = (q + pot) / rho;
        Ok(Self {
            rho,
            m,
            u,
            q,
            f: [scale * m[0], scale * m[1]],
        })
    }
}

/// Contact-discontinuity Riemann datum `ρ± = ρ0`, `m± = (±ρ0 u0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricContactDatum {
    pub rho0: f64,
    pub u0: f64,
}

impl SymmetricContactDatum {
    pub fn new(rho0: f64, u0: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if !(rho0.is_finite() && rho0 > 0.0) {
            problems.push(format!("rho0 must be finite and > 0, got {rho0}"));
        }
        if !u0.is_finite() || u0 == 0.0 {
            problems.push(format!(
                "u0 must be finite and nonzero (u0 != 0 is required for a contact discontinuity), got {u0}"
            ));
        }
        if problems.is_empty() {
            Ok(Self { rho0, u0 })
        } else {
            Err(Error::InvalidDatum(problems.join("; ")))
        }
    }

    pub fn mirrored(&self) -> Self {
        Self {
            rho0: self.rho0,
            u0: -self.u0,
        }
    }

    /// `m+ = (ρ0 u0, 0)`.
    pub fn momentum_right(&self) -> [f64; 2] {
        [self.rho0 * self.u0, 0.0]
    }

    pub fn momentum_left(&self) -> [f64; 2] {
        [-self.rho0 * self.u0, 0.0]
    }
}

/// Strictly increasing interface speeds `μ0 < μ1 < …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FanPartition {
    speeds: Vec<f64>,
}

impl FanPartition {
    pub fn new(speeds: Vec<f64>) -> Result<Self> {
        if speeds.is_empty() {
            return Err(Error::InvalidParameters(
                "a fan partition needs at least one speed".into(),
            ));
        }
        if speeds.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidParameters("fan speeds must be finite".into()));
        }
        if let Some(i) = speeds.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameters(format!(
                "fan speeds must be strictly increasing; mu{i} = {} >= mu{} = {}",
                speeds[i],
                i + 1,
                speeds[i + 1]
            )));
        }
        Ok(Self { speeds })
    }

    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }

    pub fn into_speeds(self) -> Vec<f64> {
        self.speeds
    }
}

/// Boundary states `(left, right)` for the symmetric contact datum.
pub fn boundary_states(
    datum: &SymmetricContactDatum,
    law: &PressureLaw,
    ctx: &PotentialContext,
) -> Result<(FanState, FanState)> {
    let left = FanState::riemann(datum.rho0, datum.momentum_left(), law, ctx)?;
    let right = FanState::riemann(datum.rho0, datum.momentum_right(), law, ctx)?;
    Ok((left, right))
}

/// `m⊗m/ρ − U + (p(ρ) − q) I`.
pub fn subsolution_matrix(s: &FanState, law: &PressureLaw) -> Result<Sym2> {
    let p = law.pressure(s.rho)?;
    let shift = p - s.q;
    let [m1, m2] = s.m;
    Ok(Sym2::new(
        m1 * m1 / s.rho - s.u.u11 + shift,
        m1 * m2 / s.rho - s.u.u12,
        m2 * m2 / s.rho + s.u.u11 + shift,
    ))
}

pub fn lambda_max(m: &Sym2) -> f64 {
    m.lambda_max()
}
