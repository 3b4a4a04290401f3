//! Checker for the full algebraic fan-subsolution system.
//!
//! Every quantity is recomputed from the raw `(ρ, m, U, q, F)` tuples and the
//! pressure law. Failing conditions are data, not errors.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pressure::{PotentialContext, PressureLaw};
use crate::reduction::FanSubsolution;
use crate::states::{subsolution_matrix, FanState, Sym2, SymmetricContactDatum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionKind {
    Equality,
    Strict,
    Nonstrict,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance for equalities, scaled by `max(1, |lhs|, |rhs|)`.
    pub tol_eq: f64,
    /// Strict conditions need `slack > tol_strict · (1 + |lhs| + |rhs|)`.
    pub tol_strict: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_eq: 1e-9,
            tol_strict: 1e-12,
        }
    }
}

/// One checked relation. `slack` is signed so that positive means satisfied
/// (for equalities it is `rhs − lhs`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub id: String,
    pub kind: ConditionKind,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

impl ConditionResult {
    pub fn scale(&self) -> f64 {
        1f64.max(self.lhs.abs()).max(self.rhs.abs())
    }

    fn equality(id: String, lhs: f64, rhs: f64, tol: &Tolerances) -> Self {
        let scale = 1f64.max(lhs.abs()).max(rhs.abs());
        let pass = (lhs - rhs).abs() <= tol.tol_eq * scale;
        Self {
            id,
            kind: ConditionKind::Equality,
            lhs,
            rhs,
            slack: rhs - lhs,
            pass,
        }
    }

    fn strict(id: String, lhs: f64, rhs: f64, slack: f64, tol: &Tolerances) -> Self {
        let pass = slack > tol.tol_strict * (1.0 + lhs.abs() + rhs.abs());
        Self {
            id,
            kind: ConditionKind::Strict,
            lhs,
            rhs,
            slack,
            pass,
        }
    }

    /// `lhs ≤ rhs`.
    fn nonstrict(id: String, lhs: f64, rhs: f64, tol: &Tolerances) -> Self {
        let scale = 1f64.max(lhs.abs()).max(rhs.abs());
        let slack = rhs - lhs;
        Self {
            id,
            kind: ConditionKind::Nonstrict,
            lhs,
            rhs,
            slack,
            pass: slack >= -tol.tol_eq * scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportContext {
    pub law: String,
    pub rho_star: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub datum: Option<SymmetricContactDatum>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub conditions: Vec<ConditionResult>,
    pub all_pass: bool,
    pub tolerances: Tolerances,
    pub context: ReportContext,
}

impl VerificationReport {
    pub fn get(&self, id: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.id == id)
    }

    pub fn failing(&self) -> impl Iterator<Item = &ConditionResult> {
        self.conditions.iter().filter(|c| !c.pass)
    }

    /// Smallest slack over the inequality conditions.
    pub fn min_inequality_slack(&self) -> f64 {
        self.conditions
            .iter()
            .filter(|c| c.kind != ConditionKind::Equality)
            .map(|c| c.slack)
            .fold(f64::INFINITY, f64::min)
    }
}

/// `q + P(ρ) − p(ρ)`
fn energy(s: &FanState, law: &PressureLaw, ctx: &PotentialContext) -> Result<f64> {
    Ok(s.q + law.potential(s.rho, ctx)? - law.pressure(s.rho)?)
}

/// Checks speed order, Rankine–Hugoniot equalities and entropy inequalities
/// at every interface, and the trace, determinant and density conditions in
/// every interior region.
pub fn verify(
    candidate: &FanSubsolution,
    law: &PressureLaw,
    ctx: &PotentialContext,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    candidate.check_shape()?;
    let speeds = &candidate.speeds;
    let chain = candidate.chain();
    let mut conditions = Vec::with_capacity(7 * candidate.interior.len() + 7);

    for (i, w) in speeds.windows(2).enumerate() {
        conditions.push(ConditionResult::strict(
            format!("speed.order.pair{i}"),
            w[0],
            w[1],
            w[1] - w[0],
            tol,
        ));
    }

    for (i, &mu) in speeds.iter().enumerate() {
        let (l, r) = (chain[i], chain[i + 1]);
        conditions.push(ConditionResult::equality(
            format!("rh.mass.iface{i}"),
            mu * (l.rho - r.rho),
            l.m[1] - r.m[1],
            tol,
        ));
        conditions.push(ConditionResult::equality(
            format!("rh.m1.iface{i}"),
            mu * (l.m[0] - r.m[0]),
            l.u.u12 - r.u.u12,
            tol,
        ));
        conditions.push(ConditionResult::equality(
            format!("rh.m2.iface{i}"),
            mu * (l.m[1] - r.m[1]),
            -l.u.u11 + l.q + r.u.u11 - r.q,
            tol,
        ));
    }

    for (i, &mu) in speeds.iter().enumerate() {
        let (l, r) = (chain[i], chain[i + 1]);
        let el = energy(l, law, ctx)?;
        let er = energy(r, law, ctx)?;
        conditions.push(ConditionResult::nonstrict(
            format!("entropy.iface{i}"),
            mu * (el - er),
            l.f[1] - r.f[1],
            tol,
        ));
    }

    for (k, s) in candidate.interior.iter().enumerate() {
        let region = k + 1;
        let m = subsolution_matrix(s, law)?;
        let tr = m.trace();
        conditions.push(ConditionResult::strict(
            format!("subsol.tr.region{region}"),
            tr,
            0.0,
            -tr,
            tol,
        ));
        let product = m.m11 * m.m22;
        let square = m.m12 * m.m12;
        conditions.push(ConditionResult::strict(
            format!("subsol.det.region{region}"),
            product,
            square,
            product - square,
            tol,
        ));
    }

    for (k, s) in candidate.interior.iter().enumerate() {
        conditions.push(ConditionResult::strict(
            format!("density.region{}", k + 1),
            s.rho,
            0.0,
            s.rho,
            tol,
        ));
    }

    let all_pass = conditions.iter().all(|c| c.pass);
    Ok(VerificationReport {
        conditions,
        all_pass,
        tolerances: *tol,
        context: ReportContext {
            law: law.to_string(),
            rho_star: ctx.rho_star,
            datum: None,
        },
    })
}

/// Eigenvalue cross-check for one region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenCheck {
    pub region: usize,
    pub lambda_max: f64,
    pub trace: f64,
    pub det: f64,
    /// `λ_max`, trace or determinant lies within the tolerance of zero.
    pub marginal: bool,
    /// Sign of `λ_max` matches the trace/determinant test (always true when marginal).
    pub agrees: bool,
}

pub fn eigen_check(region: usize, m: &Sym2, tol: f64) -> EigenCheck {
    let lambda = m.lambda_max();
    let trace = m.trace();
    let det = m.det();
    let marginal = lambda.abs() < tol || trace.abs() < tol || det.abs() < tol;
    let agrees = marginal || (lambda < 0.0) == m.is_negative_definite();
    EigenCheck {
        region,
        lambda_max: lambda,
        trace,
        det,
        marginal,
        agrees,
    }
}

/// Compares `λ_max` of every interior subsolution matrix with the
/// trace/determinant sign test.
pub fn eigen_crosscheck(
    candidate: &FanSubsolution,
    law: &PressureLaw,
    tol: f64,
) -> Result<Vec<EigenCheck>> {
    candidate
        .interior
        .iter()
        .enumerate()
        .map(|(k, s)| Ok(eigen_check(k + 1, &subsolution_matrix(s, law)?, tol)))
        .collect()
}
