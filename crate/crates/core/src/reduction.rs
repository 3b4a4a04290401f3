//! Five-region candidate from the six free parameters of the mirror-symmetric
//! ansatz `μ = (−b, −a, a, b)`, region 3 = reflection of region 1.
//!
//! The Rankine–Hugoniot equalities are solved in closed form:
//!
//! ```text
//! [m1]2 = −b(ρ1 − ρ0),   m2 = 0,   ρ2 = ρ1 − (b/a)(ρ1 − ρ0)
//! [U1]11 = −b²(ρ1 − ρ0) − p(ρ0) + q1        [U1]12 = −b(ρ0 u0 + [m1]1)
//! [U2]11 = −b(b − a)(ρ1 − ρ0) − p(ρ0) + q2   [U2]12 = −(b − a)[m1]1 − b ρ0 u0
//! ```
//!
//! and the second flux component of region 1 is chosen so that both exterior
//! entropy inequalities are equalities; region 2 carries zero flux.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pressure::{PotentialContext, PressureLaw};
use crate::states::{
    boundary_states, FanPartition, FanState, SymmetricContactDatum, TracelessSym2,
};

/// Free unknowns `(a, b, ρ1, [m1]1, q1, q2)` with `0 < a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricParameters {
    a: f64,
    b: f64,
    pub rho1: f64,
    pub m11: f64,
    pub q1: f64,
    pub q2: f64,
}

impl SymmetricParameters {
    pub fn new(a: f64, b: f64, rho1: f64, m11: f64, q1: f64, q2: f64) -> Result<Self> {
        if ![a, b, rho1, m11, q1, q2].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameters(
                "all parameters must be finite".into(),
            ));
        }
        if !(0.0 < a && a < b) {
            return Err(Error::InvalidParameters(format!(
                "speeds must satisfy 0 < a < b, got a = {a}, b = {b}"
            )));
        }
        Ok(Self {
            a,
            b,
            rho1,
            m11,
            q1,
            q2,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `ρ2 = ρ1 − (b/a)(ρ1 − ρ0)`.
    pub fn rho2(&self, rho0: f64) -> f64 {
        self.rho1 - self.b / self.a * (self.rho1 - rho0)
    }
}

/// Piecewise-constant candidate: `speeds.len() == interior.len() + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FanSubsolution {
    pub speeds: Vec<f64>,
    pub left: FanState,
    pub interior: Vec<FanState>,
    pub right: FanState,
}

impl FanSubsolution {
    pub fn from_partition(
        partition: FanPartition,
        left: FanState,
        interior: Vec<FanState>,
        right: FanState,
    ) -> Result<Self> {
        let sub = Self {
            speeds: partition.into_speeds(),
            left,
            interior,
            right,
        };
        sub.check_shape()?;
        Ok(sub)
    }

    pub fn check_shape(&self) -> Result<()> {
        if self.interior.is_empty() {
            return Err(Error::Structural(
                "candidate has no interior regions".into(),
            ));
        }
        if self.speeds.len() != self.interior.len() + 1 {
            return Err(Error::Structural(format!(
                "{} interior regions need {} speeds, got {}",
                self.interior.len(),
                self.interior.len() + 1,
                self.speeds.len()
            )));
        }
        Ok(())
    }

    /// All states left to right: left, interiors, right.
    pub fn chain(&self) -> Vec<&FanState> {
        std::iter::once(&self.left)
            .chain(self.interior.iter())
            .chain(std::iter::once(&self.right))
            .collect()
    }

    /// Reflection `x ↦ −x` of every state; speeds are unchanged.
    pub fn x_reflection(&self) -> Self {
        Self {
            speeds: self.speeds.clone(),
            left: self.left.x_reflection(),
            interior: self.interior.iter().map(FanState::x_reflection).collect(),
            right: self.right.x_reflection(),
        }
    }
}

pub fn reduce(
    params: &SymmetricParameters,
    datum: &SymmetricContactDatum,
    law: &PressureLaw,
    ctx: &PotentialContext,
) -> Result<FanSubsolution> {
    let SymmetricParameters {
        a,
        b,
        rho1,
        m11,
        q1,
        q2,
    } = *params;
    let rho0 = datum.rho0;
    let u0 = datum.u0;
    if !(rho1 > 0.0) {
        return Err(Error::DensityPositivity {
            region: "region 1",
            rho: rho1,
        });
    }
    let rho2 = params.rho2(rho0);
    if !(rho2 > 0.0) {
        return Err(Error::DensityPositivity {
            region: "region 2",
            rho: rho2,
        });
    }

    let (left, right) = boundary_states(datum, law, ctx)?;
    let p0 = law.pressure(rho0)?;
    let jump = rho1 - rho0;

    let energy_jump = q1 + law.potential(rho1, ctx)?
        - law.pressure(rho1)?
        - 0.5 * rho0 * u0 * u0
        - law.potential(rho0, ctx)?;
    let region1 = FanState {
        rho: rho1,
        m: [m11, -b * jump],
        u: TracelessSym2::new(-b * b * jump - p0 + q1, -b * (rho0 * u0 + m11)),
        q: q1,
        f: [0.0, -b * energy_jump],
    };
    // ρ2 enters only through p and P evaluated by the verifier; check the
    // domain here so a tabulated law fails early with a clear error.
    law.check_density(rho2)?;
    let region2 = FanState {
        rho: rho2,
        m: [0.0, 0.0],
        u: TracelessSym2::new(
            -b * (b - a) * jump - p0 + q2,
            -(b - a) * m11 - b * rho0 * u0,
        ),
        q: q2,
        f: [0.0, 0.0],
    };
    let region3 = FanState {
        rho: region1.rho,
        m: [-region1.m[0], -region1.m[1]],
        u: region1.u,
        q: region1.q,
        f: [-region1.f[0], -region1.f[1]],
    };

    FanSubsolution::from_partition(
        FanPartition::new(vec![-b, -a, a, b])?,
        left,
        vec![region1, region2, region3],
        right,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> (
        SymmetricParameters,
        SymmetricContactDatum,
        PressureLaw,
        PotentialContext,
    ) {
        let b = 3f64.sqrt();
        let a = b / 8.0;
        let rho1 = 113.0 / 112.0;
        let q1 = 0.5 * (rho1 + (rho1 - 1.0) * 4.0 + 1.0 + rho1 * rho1);
        let q2 = 1.189453125;
        (
            SymmetricParameters::new(a, b, rho1, -rho1, q1, q2).unwrap(),
            SymmetricContactDatum::new(1.0, 1.0).unwrap(),
            PressureLaw::polytropic(1.0, 2.0).unwrap(),
            PotentialContext::new(1.0).unwrap(),
        )
    }

    #[test]
    fn golden_reduction() {
        let (params, datum, law, ctx) = golden();
        let sub = reduce(&params, &datum, &law, &ctx).unwrap();
        let s3 = 3f64.sqrt();
        assert_eq!(sub.speeds, vec![-s3, -s3 / 8.0, s3 / 8.0, s3]);
        let r1 = &sub.interior[0];
        let r2 = &sub.interior[1];
        assert!((r2.rho - 0.9375).abs() < 1e-15);
        assert!((r1.m[1] - (-s3 / 112.0)).abs() < 1e-15);
        assert!((r1.u.u12 - s3 / 112.0).abs() < 1e-15);
        // [F1]2 = −b(q1 + P(ρ1) − p(ρ1) − 1/2 − P(1)) with P = ρ² − ρ.
        let rho1 = 113.0 / 112.0;
        let expected = -s3 * (params.q1 + (rho1 * rho1 - rho1) - rho1 * rho1 - 0.5);
        assert!((r1.f[1] - expected).abs() < 1e-15);
        assert!((r1.f[1] - (-0.0387309)).abs() < 1e-7);
        assert_eq!(r2.m, [0.0, 0.0]);
        assert_eq!(r2.f, [0.0, 0.0]);
    }

    #[test]
    fn region_three_mirrors_region_one() {
        let (params, datum, law, ctx) = golden();
        let sub = reduce(&params, &datum, &law, &ctx).unwrap();
        let (r1, r3) = (&sub.interior[0], &sub.interior[2]);
        assert_eq!(r3.rho, r1.rho);
        assert_eq!(r3.m, [-r1.m[0], -r1.m[1]]);
        assert_eq!(r3.u, r1.u);
        assert_eq!(r3.q, r1.q);
        assert_eq!(r3.f, [-r1.f[0], -r1.f[1]]);
    }

    #[test]
    fn zero_density_jump() {
        let (mut params, datum, law, ctx) = golden();
        params.rho1 = 1.0;
        let sub = reduce(&params, &datum, &law, &ctx).unwrap();
        assert_eq!(sub.interior[0].m[1], 0.0);
        assert_eq!(sub.interior[1].rho, 1.0);
    }

    #[test]
    fn rho2_identity() {
        let b = 2.0;
        let a = 0.3;
        for eps in [0.01, 0.1, 0.37, 0.9] {
            let rho1 = 1.0 + a * eps / (b - a);
            let p = SymmetricParameters::new(a, b, rho1, 0.0, 0.0, 0.0).unwrap();
            assert!((p.rho2(1.0) - (1.0 - eps)).abs() < 1e-14);
        }
    }

    #[test]
    fn density_positivity_enforced() {
        let (_, datum, law, ctx) = golden();
        // ρ1 beyond bρ0/(b − a) makes ρ2 negative.
        let p = SymmetricParameters::new(1.0, 2.0, 2.5, 0.0, 3.0, 3.0).unwrap();
        assert!(matches!(
            reduce(&p, &datum, &law, &ctx),
            Err(Error::DensityPositivity {
                region: "region 2",
                ..
            })
        ));
        let p = SymmetricParameters::new(1.0, 2.0, -0.5, 0.0, 3.0, 3.0).unwrap();
        assert!(matches!(
            reduce(&p, &datum, &law, &ctx),
            Err(Error::DensityPositivity {
                region: "region 1",
                ..
            })
        ));
    }

    #[test]
    fn speed_invariant() {
        assert!(SymmetricParameters::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(SymmetricParameters::new(0.0, 1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(SymmetricParameters::new(2.0, 1.0, 1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn shape_check() {
        let (params, datum, law, ctx) = golden();
        let mut sub = reduce(&params, &datum, &law, &ctx).unwrap();
        sub.speeds.pop();
        assert!(matches!(sub.check_shape(), Err(Error::Structural(_))));
    }
}
