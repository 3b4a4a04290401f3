//! Deterministic parameter selection for the five-region construction.
//!
//! Order of choices: `b² = p′(ρ0) + 1`, then `ε` by halving from `ρ0/2`, then
//! `q2`, then `a` by halving from `b/2`, and finally
//!
//! ```text
//! ρ1 = ρ0 + aε/(b − a)
//! 2 q1 = ρ1 u0² + (ρ1 − ρ0)(b² + 1) + p(ρ0) + p(ρ1)
//! [m1]1 = −ρ1 u0
//! ```
//!
//! Selection inequalities are evaluated with the potential referenced at
//! `ρ0`. Their slacks do not depend on `ρ*`; fixing the reference also fixes
//! the margin scale so the chosen `(ε, a)` never depend on `ρ*` either.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pressure::{PotentialContext, PressureLaw};
use crate::reduction::{reduce, FanSubsolution, SymmetricParameters};
use crate::states::SymmetricContactDatum;
use crate::verifier::{eigen_crosscheck, verify, EigenCheck, Tolerances, VerificationReport};

/// Absolute floor added to every selection margin.
pub const MARGIN_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectorOptions {
    /// Safety factor in `(0, 1)`.
    pub theta: f64,
    /// First `ε` tried, as a fraction of `ρ0`.
    pub eps_start_fraction: f64,
    /// First `a` tried, as a fraction of `b`.
    pub a_start_fraction: f64,
    pub max_halvings: usize,
}

impl Default for SelectorOptions {
    fn default() -> Self {
        Self {
            theta: 0.1,
            eps_start_fraction: 0.5,
            a_start_fraction: 0.5,
            max_halvings: 200,
        }
    }
}

impl SelectorOptions {
    pub fn with_theta(theta: f64) -> Result<Self> {
        let opts = Self {
            theta,
            ..Self::default()
        };
        opts.validate()?;
        Ok(opts)
    }

    pub fn validate(&self) -> Result<()> {
        let frac_ok = |f: f64| f > 0.0 && f < 1.0;
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::InvalidParameters(format!(
                "theta must lie in (0, 1), got {}",
                self.theta
            )));
        }
        if !frac_ok(self.eps_start_fraction) || !frac_ok(self.a_start_fraction) {
            return Err(Error::InvalidParameters(
                "start fractions must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Selected density offset `ε ∈ (0, ρ0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Epsilon(f64);

impl Epsilon {
    pub fn value(&self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    /// `lhs < rhs`
    Less,
    /// `lhs > rhs`
    Greater,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
    pub sense: Sense,
    /// Upper bound on the margin scale, for conditions whose two sides share
    /// a large common term while their attainable gap is fixed.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scale_cap: Option<f64>,
}

impl Inequality {
    fn less(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            sense: Sense::Less,
            scale_cap: None,
        }
    }

    fn greater(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            sense: Sense::Greater,
            scale_cap: None,
        }
    }

    /// Positive when satisfied.
    pub fn slack(&self) -> f64 {
        match self.sense {
            Sense::Less => self.rhs - self.lhs,
            Sense::Greater => self.lhs - self.rhs,
        }
    }

    /// `θ · min((|lhs| + |rhs|)/2, cap) + 1e-14`.
    pub fn margin(&self, theta: f64) -> f64 {
        let scale = (self.lhs.abs() + self.rhs.abs()) / 2.0;
        theta * self.scale_cap.map_or(scale, |cap| scale.min(cap)) + MARGIN_FLOOR
    }

    fn capped(self, cap: f64) -> Self {
        Self {
            scale_cap: Some(cap),
            ..self
        }
    }

    pub fn holds_with_margin(&self, theta: f64) -> bool {
        self.slack() >= self.margin(theta)
    }
}

fn reference(datum: &SymmetricContactDatum) -> PotentialContext {
    PotentialContext {
        rho_star: datum.rho0,
    }
}

pub fn choose_b(law: &PressureLaw, rho0: f64) -> Result<f64> {
    Ok((law.dpressure(rho0)? + 1.0).sqrt())
}

/// `ε(u0² + 2P′(ρ0) + 3) + 2P(ρ0 − ε) − p(ρ0 − ε) − 2P(ρ0) + p(ρ0) < ρ0 u0²/2`
pub fn epsilon_condition(
    law: &PressureLaw,
    datum: &SymmetricContactDatum,
    eps: f64,
) -> Result<Inequality> {
    let ctx = reference(datum);
    let (rho0, u0) = (datum.rho0, datum.u0);
    let low = rho0 - eps;
    let lhs = eps * (u0 * u0 + 2.0 * law.dpotential(rho0, &ctx)? + 3.0)
        + 2.0 * law.potential(low, &ctx)?
        - law.pressure(low)?
        - 2.0 * law.potential(rho0, &ctx)?
        + law.pressure(rho0)?;
    Ok(Inequality::less(lhs, 0.5 * rho0 * u0 * u0))
}

/// The three smallness conditions on `a`, in order.
pub fn a_conditions(
    law: &PressureLaw,
    datum: &SymmetricContactDatum,
    b: f64,
    eps: f64,
    a: f64,
) -> Result<[Inequality; 3]> {
    let ctx = reference(datum);
    let (rho0, u0) = (datum.rho0, datum.u0);
    let delta = a * eps / (b - a);
    let rho1 = rho0 + delta;
    let p0 = law.pressure(rho0)?;
    let p1 = law.pressure(rho1)?;
    let dp0 = law.dpressure(rho0)?;
    let pot_quot = (2.0 * law.potential(rho1, &ctx)? - 2.0 * law.potential(rho0, &ctx)?) / delta;
    let p_quot = (p1 - p0) / delta;

    // As a -> 0 both sides of a1 and a2 differ by exactly 1, so their margin
    // scale is capped there; otherwise a stiff law (θ p′(ρ0) ≳ 1) never passes.
    let a1 = Inequality::less(
        pot_quot - p_quot,
        2.0 * law.dpotential(rho0, &ctx)? - dp0 + 1.0,
    )
    .capped(1.0);
    let a2 = Inequality::less(p_quot * (1.0 + delta / rho0), dp0 + 1.0).capped(1.0);
    let abe = a * b * eps;
    let a3 = Inequality::greater(
        (abe - 0.5 * rho0 * u0 * u0) * (-abe - p0 + law.pressure(rho0 - eps)?),
        (a * u0 * (rho0 - eps)).powi(2),
    );
    Ok([a1, a2, a3])
}

/// `2 q2 = p(ρ0) + p(ρ0 − ε) + ρ0 u0²/2`
pub fn compute_q2(law: &PressureLaw, datum: &SymmetricContactDatum, eps: f64) -> Result<f64> {
    let (rho0, u0) = (datum.rho0, datum.u0);
    Ok(0.5 * (law.pressure(rho0)? + law.pressure(rho0 - eps)? + 0.5 * rho0 * u0 * u0))
}

/// Full parameter set for a given `(b, a, ε)`.
pub fn derive_parameters(
    law: &PressureLaw,
    datum: &SymmetricContactDatum,
    b: f64,
    a: f64,
    eps: f64,
) -> Result<SymmetricParameters> {
    let (rho0, u0) = (datum.rho0, datum.u0);
    let rho1 = rho0 + a * eps / (b - a);
    let q1 = 0.5
        * (rho1 * u0 * u0
            + (rho1 - rho0) * (b * b + 1.0)
            + law.pressure(rho0)?
            + law.pressure(rho1)?);
    let q2 = compute_q2(law, datum, eps)?;
    SymmetricParameters::new(a, b, rho1, -rho1 * u0, q1, q2)
}

fn accepted<F>(try_candidate: F, theta: f64) -> bool
where
    F: FnOnce() -> Result<Vec<Inequality>>,
{
    // Candidates outside a tabulated law's hull count as rejected.
    match try_candidate() {
        Ok(conds) => conds.iter().all(|c| c.holds_with_margin(theta)),
        Err(_) => false,
    }
}

pub fn choose_epsilon(
    law: &PressureLaw,
    datum: &SymmetricContactDatum,
    opts: &SelectorOptions,
) -> Result<Epsilon> {
    opts.validate()?;
    let mut eps = datum.rho0 * opts.eps_start_fraction;
    for _ in 0..=opts.max_halvings {
        if accepted(|| Ok(vec![epsilon_condition(law, datum, eps)?]), opts.theta) {
            return Ok(Epsilon(eps));
        }
        eps *= 0.5;
    }
    Err(Error::SelectionExhausted {
        what: "epsilon",
        halvings: opts.max_halvings,
    })
}

pub fn choose_a(
    law: &PressureLaw,
    datum: &SymmetricContactDatum,
    b: f64,
    eps: Epsilon,
    opts: &SelectorOptions,
) -> Result<f64> {
    opts.validate()?;
    let mut a = b * opts.a_start_fraction;
    for _ in 0..=opts.max_halvings {
        if accepted(
            || Ok(a_conditions(law, datum, b, eps.value(), a)?.to_vec()),
            opts.theta,
        ) {
            return Ok(a);
        }
        a *= 0.5;
    }
    Err(Error::SelectionExhausted {
        what: "a",
        halvings: opts.max_halvings,
    })
}

/// Every inequality the construction relies on, at one `(a, ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Families {
    pub epsilon: Inequality,
    pub a1: Inequality,
    pub a2: Inequality,
    pub a3: Inequality,
    /// Interior entropy inequality `b·(…) ≤ a·(…)`.
    pub en: Inequality,
    pub tr1: Inequality,
    pub det1: Inequality,
    /// Factors of `det1`; both negative for a valid construction.
    pub det1_factors: [f64; 2],
    pub tr2: Inequality,
    pub det2: Inequality,
}

impl Families {
    pub const NAMES: [&'static str; 9] = [
        "epsilon", "a1", "a2", "a3", "en", "tr1", "det1", "tr2", "det2",
    ];

    pub fn all(&self) -> [Inequality; 9] {
        [
            self.epsilon,
            self.a1,
            self.a2,
            self.a3,
            self.en,
            self.tr1,
            self.det1,
            self.tr2,
            self.det2,
        ]
    }

    pub fn slacks(&self) -> [f64; 9] {
        self.all().map(|c| c.slack())
    }

    pub fn min_slack(&self) -> f64 {
        self.slacks().into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates every family from the reduced closed forms, independently of
/// the verifier.
pub fn families(
    law: &PressureLaw,
    datum: &SymmetricContactDatum,
    b: f64,
    a: f64,
    eps: f64,
) -> Result<Families> {
    let ctx = reference(datum);
    let (rho0, u0) = (datum.rho0, datum.u0);
    let params = derive_parameters(law, datum, b, a, eps)?;
    let (rho1, q1, q2) = (params.rho1, params.q1, params.q2);
    let rho2 = params.rho2(rho0);
    let jump = rho1 - rho0;
    let p0 = law.pressure(rho0)?;
    let p1 = law.pressure(rho1)?;
    let p2 = law.pressure(rho2)?;
    let pot0 = law.potential(rho0, &ctx)?;
    let pot1 = law.potential(rho1, &ctx)?;
    let pot2 = law.potential(rho2, &ctx)?;
    let [a1, a2, a3] = a_conditions(law, datum, b, eps, a)?;

    let e1 = q1 + pot1 - p1;
    let en = Inequality::less(
        b * (e1 - 0.5 * rho0 * u0 * u0 - pot0),
        a * (e1 - q2 - pot2 + p2),
    );

    let tr1 = Inequality::less(
        rho1 * u0 * u0 + b * b * jump * jump / rho1 + 2.0 * (p1 - q1),
        0.0,
    );
    let f1 = rho1 * u0 * u0 + b * b * jump + p0 + p1 - 2.0 * q1;
    let f2 = -b * b * jump * rho0 / rho1 - p0 + p1;
    let det1 = Inequality::greater(f1 * f2, 0.0);

    let tr2 = Inequality::less(p2 - q2, 0.0);
    let bba = b * (b - a) * jump;
    let det2 = Inequality::greater(
        (bba + p0 + p2 - 2.0 * q2) * (-bba - p0 + p2),
        (b * rho0 - (b - a) * rho1).powi(2) * u0 * u0,
    );

    Ok(Families {
        epsilon: epsilon_condition(law, datum, eps)?,
        a1,
        a2,
        a3,
        en,
        tr1,
        det1,
        det1_factors: [f1, f2],
        tr2,
        det2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub b: f64,
    pub epsilon: Epsilon,
    pub a: f64,
    pub params: SymmetricParameters,
    pub families: Families,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub selection: Selection,
    pub subsolution: FanSubsolution,
    pub report: VerificationReport,
    pub eigen: Vec<EigenCheck>,
}

/// Runs the full selection, reduces to a five-region subsolution and
/// verifies it. A failing verification is returned as
/// [`Error::InternalConsistency`] carrying the report.
pub fn construct(
    datum: &SymmetricContactDatum,
    law: &PressureLaw,
    ctx: &PotentialContext,
    opts: &SelectorOptions,
    tol: &Tolerances,
) -> Result<Construction> {
    let b = choose_b(law, datum.rho0)?;
    let epsilon = choose_epsilon(law, datum, opts)?;
    let a = choose_a(law, datum, b, epsilon, opts)?;
    let params = derive_parameters(law, datum, b, a, epsilon.value())?;
    let subsolution = reduce(&params, datum, law, ctx)?;
    let mut report = verify(&subsolution, law, ctx, tol)?;
    report.context.datum = Some(*datum);
    if !report.all_pass {
        return Err(Error::InternalConsistency {
            report: Box::new(report),
        });
    }
    let eigen = eigen_crosscheck(&subsolution, law, 1e-10)?;
    let families = families(law, datum, b, a, epsilon.value())?;
    Ok(Construction {
        selection: Selection {
            b,
            epsilon,
            a,
            params,
            families,
        },
        subsolution,
        report,
        eigen,
    })
}
