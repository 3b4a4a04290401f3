//! Why fewer than five regions cannot work.
//!
//! For three regions the Rankine–Hugoniot equalities force `ρ1 = ρ0`,
//! `[m1]2 = 0` and `[U1]11 − q1 = −p(ρ0)`, which makes one factor of the
//! determinant condition vanish identically: the strict inequality
//! `0 > [U1]12²` can never hold. [`three_region_certificate`] carries that
//! chain out symbolically. Four regions are only scanned numerically.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pressure::{PotentialContext, PressureLaw};
use crate::reduction::FanSubsolution;
use crate::states::{boundary_states, FanState, SymmetricContactDatum, TracelessSym2};
use crate::verifier::{verify, Tolerances};

pub const EVIDENCE_LABEL: &str = "numerical evidence";

/// Integer combination `kinetic·(ρ0 u0²/2) + pressure·p(ρ0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Term {
    kinetic: i64,
    pressure: i64,
}

impl Term {
    const ZERO: Term = Term {
        kinetic: 0,
        pressure: 0,
    };
    const KINETIC: Term = Term {
        kinetic: 1,
        pressure: 0,
    };
    const PRESSURE: Term = Term {
        kinetic: 0,
        pressure: 1,
    };

    fn plus(self, o: Term) -> Term {
        Term {
            kinetic: self.kinetic + o.kinetic,
            pressure: self.pressure + o.pressure,
        }
    }

    fn minus(self, o: Term) -> Term {
        Term {
            kinetic: self.kinetic - o.kinetic,
            pressure: self.pressure - o.pressure,
        }
    }

    fn is_zero(self) -> bool {
        self == Term::ZERO
    }

    fn value(self, kinetic: f64, p0: f64) -> f64 {
        let mut v = 0.0;
        if self.kinetic != 0 {
            v += self.kinetic as f64 * kinetic;
        }
        if self.pressure != 0 {
            v += self.pressure as f64 * p0;
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForcedValue {
    pub symbol: String,
    pub expression: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContradictionCertificate {
    pub regions: usize,
    pub forced: Vec<ForcedValue>,
    pub derivation: Vec<String>,
    /// Left side of the determinant condition after substitution.
    pub det_lhs: f64,
    /// Lower bound of its right side, `[U1]12² ≥ 0`.
    pub det_rhs_lower_bound: f64,
    pub conclusion: String,
}

/// Exact obstruction for any three-region fan (`μ0 ≠ μ1` is all that is used).
pub fn three_region_certificate(
    datum: &SymmetricContactDatum,
    law: &PressureLaw,
) -> Result<ContradictionCertificate> {
    let rho0 = datum.rho0;
    let p0 = law.pressure(rho0)?;
    let kinetic = 0.5 * rho0 * datum.u0 * datum.u0;

    // Mass balance at both interfaces: μ0(ρ0 − ρ1) = −[m1]2, μ1(ρ1 − ρ0) = [m1]2.
    // Adding gives (μ1 − μ0)(ρ1 − ρ0) = 0, so ρ1 = ρ0 and p(ρ1) = p(ρ0).
    let p_rho1 = Term::PRESSURE;
    // Then [m1]2 = μ1(ρ1 − ρ0) = 0 exactly and every [m1]2 term drops out.

    // Boundary state: q± = K + p(ρ0), [U±]11 = K.
    let q_boundary = Term::KINETIC.plus(Term::PRESSURE);
    let u11_boundary = Term::KINETIC;
    // Normal momentum at the left interface:
    // μ0(0 − [m1]2) = −[U−]11 + q− + [U1]11 − q1 with vanishing left side.
    let u11_minus_q1 = Term::ZERO.minus(q_boundary.minus(u11_boundary));

    // Second determinant factor: [m1]2²/ρ1 + [U1]11 + p(ρ1) − q1.
    let second_factor = u11_minus_q1.plus(p_rho1);
    let det_lhs = if second_factor.is_zero() {
        0.0
    } else {
        f64::NAN
    };

    let forced = vec![
        ForcedValue {
            symbol: "rho1".into(),
            expression: "rho0".into(),
            value: rho0,
        },
        ForcedValue {
            symbol: "m1_2".into(),
            expression: "0".into(),
            value: 0.0,
        },
        ForcedValue {
            symbol: "U1_11 - q1".into(),
            expression: "-p(rho0)".into(),
            value: u11_minus_q1.value(kinetic, p0),
        },
    ];
    let derivation = vec![
        "mass balance at mu0 and mu1: (mu1 - mu0)(rho1 - rho0) = 0, mu0 != mu1 => rho1 = rho0"
            .into(),
        "mass balance at mu1: m1_2 = mu1 (rho1 - rho0) = 0".into(),
        "normal momentum at mu0: 0 = -U-_11 + q- + U1_11 - q1 => U1_11 - q1 = -p(rho0)".into(),
        "second determinant factor: m1_2^2/rho1 + (U1_11 - q1) + p(rho1) = -p(rho0) + p(rho0) = 0"
            .into(),
        "determinant condition reads 0 > (U1_12)^2, impossible".into(),
    ];
    let conclusion = if det_lhs == 0.0 {
        "infeasible"
    } else {
        "inconclusive"
    };
    Ok(ContradictionCertificate {
        regions: 3,
        forced,
        derivation,
        det_lhs,
        det_rhs_lower_bound: 0.0,
        conclusion: conclusion.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub low: f64,
    pub high: f64,
    pub count: usize,
}

impl Axis {
    fn new(name: &str, low: f64, high: f64, count: usize) -> Self {
        Self {
            name: name.into(),
            low,
            high,
            count,
        }
    }

    fn node(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.low
        } else {
            self.low + (self.high - self.low) * i as f64 / (self.count - 1) as f64
        }
    }
}

/// Grid over the free parameters of an `n`-interior ansatz, plus optional
/// uniform random samples in the same box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzGrid {
    pub axes: Vec<Axis>,
    pub random_samples: usize,
    pub cap: usize,
}

pub const DEFAULT_SCAN_CAP: usize = 1_000_000;

impl AnsatzGrid {
    /// Default box for `n` interior regions. Speeds scale with
    /// `w = sqrt(p′(ρ0) + 1) + |u0|`, energies with `q±`.
    pub fn default_for(n: usize, datum: &SymmetricContactDatum, law: &PressureLaw) -> Result<Self> {
        check_n(n)?;
        let w = (law.dpressure(datum.rho0)? + 1.0).sqrt() + datum.u0.abs();
        let e = 0.5 * datum.rho0 * datum.u0 * datum.u0 + law.pressure(datum.rho0)?;
        let axes = match n {
            1 => vec![
                Axis::new("mu0", -4.0 * w, 4.0 * w, 20),
                Axis::new("gap", w / 20.0, 8.0 * w, 20),
                Axis::new("dq", -2.0 * e, 4.0 * e, 50),
            ],
            _ => {
                let mom = 2.0 * datum.rho0 * datum.u0.abs();
                vec![
                    Axis::new("b", w / 50.0, 4.0 * w, 40),
                    Axis::new("m11", -mom, mom, 50),
                    Axis::new("dq", -2.0 * e, 4.0 * e, 50),
                ]
            }
        };
        Ok(Self {
            axes,
            random_samples: 1000,
            cap: DEFAULT_SCAN_CAP,
        })
    }

    pub fn grid_cells(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    fn validate(&self, n: usize) -> Result<()> {
        let expected = 3;
        if self.axes.len() != expected {
            return Err(Error::Grid(format!(
                "the {n}-interior ansatz has {expected} free parameters, grid has {} axes",
                self.axes.len()
            )));
        }
        for ax in &self.axes {
            if !(ax.low.is_finite() && ax.high.is_finite() && ax.low <= ax.high && ax.count >= 1) {
                return Err(Error::Grid(format!(
                    "axis {} is not a finite nonempty range",
                    ax.name
                )));
            }
        }
        let total = self
            .axes
            .iter()
            .try_fold(1usize, |acc, a| acc.checked_mul(a.count))
            .and_then(|g| g.checked_add(self.random_samples));
        match total {
            Some(t) if t <= self.cap => Ok(()),
            _ => Err(Error::Grid(format!(
                "scan of {} grid cells + {} samples exceeds the cap of {} evaluations",
                self.grid_cells(),
                self.random_samples,
                self.cap
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestCandidate {
    pub params: BTreeMap<String, f64>,
    pub min_slack: f64,
    pub failing: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub label: String,
    pub interior_regions: usize,
    pub ansatz: String,
    pub grid: AnsatzGrid,
    pub seed: u64,
    pub evaluated: usize,
    pub feasible: usize,
    /// How many candidates passed each condition.
    pub pass_counts: BTreeMap<String, usize>,
    pub best: Option<BestCandidate>,
    pub verdict: String,
}

fn check_n(n: usize) -> Result<()> {
    match n {
        1 | 2 => Ok(()),
        3 => Err(Error::Precondition(
            "n = 3 (five regions) is feasible; use the construct command instead of a scan".into(),
        )),
        _ => Err(Error::Precondition(format!(
            "the scan supports n = 1 or n = 2 interior regions, got {n}"
        ))),
    }
}

/// `max_F min_i (c_i F + d_i)` for lines with at least one positive and one
/// negative slope; returns the maximizing `F`.
fn best_flux(lines: &[(f64, f64)]) -> f64 {
    let eval = |f: f64| {
        lines
            .iter()
            .map(|(c, d)| c * f + d)
            .fold(f64::INFINITY, f64::min)
    };
    let mut best = (f64::NEG_INFINITY, 0.0);
    for (i, (ci, di)) in lines.iter().enumerate() {
        for (cj, dj) in &lines[i + 1..] {
            if ci != cj {
                let f = (dj - di) / (ci - cj);
                let v = eval(f);
                if v > best.0 {
                    best = (v, f);
                }
            }
        }
    }
    best.1
}

struct Context<'a> {
    datum: &'a SymmetricContactDatum,
    law: &'a PressureLaw,
    ctx: PotentialContext,
    left: FanState,
    right: FanState,
    p0: f64,
}

impl Context<'_> {
    fn energy(&self, s: &FanState) -> Result<f64> {
        Ok(s.q + self.law.potential(s.rho, &self.ctx)? - self.law.pressure(s.rho)?)
    }

    /// Three regions, no symmetry assumed. Parameters `(μ0, μ1 − μ0, q1 − q±)`;
    /// the Rankine–Hugoniot equalities fix everything else.
    fn three_regions(&self, x: &[f64]) -> Result<FanSubsolution> {
        let (mu0, mu1) = (x[0], x[0] + x[1]);
        let rho0 = self.datum.rho0;
        let mom = rho0 * self.datum.u0;
        let m11 = mom * (mu0 + mu1) / (mu1 - mu0);
        let q1 = self.right.q + x[2];
        let mut region = FanState {
            rho: rho0,
            m: [m11, 0.0],
            u: TracelessSym2::new(q1 - self.p0, mu1 * (m11 - mom)),
            q: q1,
            f: [0.0, 0.0],
        };
        let (el, e1, er) = (
            self.energy(&self.left)?,
            self.energy(&region)?,
            self.energy(&self.right)?,
        );
        // Entropy at μ0: μ0(el − e1) ≤ F−2 − F; at μ1: μ1(e1 − er) ≤ F − F+2.
        region.f[1] = best_flux(&[
            (-1.0, self.left.f[1] - mu0 * (el - e1)),
            (1.0, -self.right.f[1] - mu1 * (e1 - er)),
        ]);
        Ok(FanSubsolution {
            speeds: vec![mu0, mu1],
            left: self.left,
            interior: vec![region],
            right: self.right,
        })
    }

    /// Four regions mirrored about `y = 0`: speeds `(−b, 0, b)`, region 2 the
    /// reflection of region 1. Parameters `(b, [m1]1, q1 − q±)`.
    fn four_regions(&self, x: &[f64]) -> Result<FanSubsolution> {
        let (b, m11) = (x[0], x[1]);
        let rho0 = self.datum.rho0;
        let mom = rho0 * self.datum.u0;
        let q1 = self.right.q + x[2];
        let mut r1 = FanState {
            rho: rho0,
            m: [m11, 0.0],
            u: TracelessSym2::new(q1 - self.p0, -b * (mom + m11)),
            q: q1,
            f: [0.0, 0.0],
        };
        let (el, e1, er) = (
            self.energy(&self.left)?,
            self.energy(&r1)?,
            self.energy(&self.right)?,
        );
        // With F2 = −F1: slacks −F + b(el − e1), 2F, −F − b(e1 − er).
        let f = best_flux(&[
            (-1.0, self.left.f[1] + b * (el - e1)),
            (2.0, 0.0),
            (-1.0, -self.right.f[1] - b * (e1 - er)),
        ]);
        r1.f[1] = f;
        let mut r2 = r1;
        r2.m = [-m11, 0.0];
        r2.f = [0.0, -f];
        Ok(FanSubsolution {
            speeds: vec![-b, 0.0, b],
            left: self.left,
            interior: vec![r1, r2],
            right: self.right,
        })
    }
}

struct Outcome {
    index: usize,
    feasible: bool,
    passed: Vec<bool>,
    min_slack: f64,
    failing: Vec<String>,
}

#[derive(Default)]
struct Tally {
    evaluated: usize,
    feasible: usize,
    pass_counts: Vec<usize>,
    /// `(min_slack, index, failing)` of the best candidate.
    best: Option<(f64, usize, Vec<String>)>,
}

impl Tally {
    fn add(mut self, o: Outcome) -> Self {
        self.evaluated += 1;
        self.feasible += o.feasible as usize;
        if self.pass_counts.len() < o.passed.len() {
            self.pass_counts.resize(o.passed.len(), 0);
        }
        for (c, p) in self.pass_counts.iter_mut().zip(&o.passed) {
            *c += *p as usize;
        }
        self.best = better(self.best, Some((o.min_slack, o.index, o.failing)));
        self
    }

    fn merge(mut self, other: Tally) -> Self {
        self.evaluated += other.evaluated;
        self.feasible += other.feasible;
        if self.pass_counts.len() < other.pass_counts.len() {
            self.pass_counts.resize(other.pass_counts.len(), 0);
        }
        for (c, o) in self.pass_counts.iter_mut().zip(&other.pass_counts) {
            *c += o;
        }
        self.best = better(self.best, other.best);
        self
    }
}

/// Larger slack wins; ties go to the smaller index so the result does not
/// depend on evaluation order.
fn better(
    a: Option<(f64, usize, Vec<String>)>,
    b: Option<(f64, usize, Vec<String>)>,
) -> Option<(f64, usize, Vec<String>)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            let a_wins = a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) || (b.0.is_nan() && !a.0.is_nan());
            Some(if a_wins { a } else { b })
        }
    }
}

/// Runs the verifier over every grid node and random sample of the
/// `n`-interior ansatz. The result is evidence, never a proof.
pub fn n_region_scan(
    datum: &SymmetricContactDatum,
    law: &PressureLaw,
    n: usize,
    grid: &AnsatzGrid,
    seed: u64,
) -> Result<ScanSummary> {
    check_n(n)?;
    grid.validate(n)?;
    let ctx = PotentialContext::new(datum.rho0)?;
    let (left, right) = boundary_states(datum, law, &ctx)?;
    let env = Context {
        datum,
        law,
        ctx,
        left,
        right,
        p0: law.pressure(datum.rho0)?,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Vec<f64>> = (0..grid.random_samples)
        .map(|_| {
            grid.axes
                .iter()
                .map(|ax| ax.low + (ax.high - ax.low) * rng.gen::<f64>())
                .collect()
        })
        .collect();
    let cells = grid.grid_cells();
    let point = |index: usize| -> Vec<f64> {
        if index < cells {
            let mut rem = index;
            let mut coords = vec![0.0; grid.axes.len()];
            for (k, ax) in grid.axes.iter().enumerate().rev() {
                coords[k] = ax.node(rem % ax.count);
                rem /= ax.count;
            }
            coords
        } else {
            samples[index - cells].clone()
        }
    };

    let tol = Tolerances::default();
    let ids: Vec<String> = {
        let probe = build(&env, n, &point(0))?;
        verify(&probe, law, &ctx, &tol)?
            .conditions
            .into_iter()
            .map(|c| c.id)
            .collect()
    };

    let tally = (0..cells + samples.len())
        .into_par_iter()
        .map(|index| {
            let x = point(index);
            let outcome = build(&env, n, &x).and_then(|cand| verify(&cand, law, &ctx, &tol));
            match outcome {
                Ok(report) => Outcome {
                    index,
                    feasible: report.all_pass,
                    min_slack: report.min_inequality_slack(),
                    passed: report.conditions.iter().map(|c| c.pass).collect(),
                    failing: report.failing().map(|c| c.id.clone()).collect(),
                },
                Err(e) => Outcome {
                    index,
                    feasible: false,
                    passed: Vec::new(),
                    min_slack: f64::NAN,
                    failing: vec![e.to_string()],
                },
            }
        })
        .fold(Tally::default, Tally::add)
        .reduce(Tally::default, Tally::merge);

    let mut pass_counts: BTreeMap<String, usize> = ids.iter().map(|id| (id.clone(), 0)).collect();
    for (id, count) in ids.iter().zip(&tally.pass_counts) {
        pass_counts.insert(id.clone(), *count);
    }
    let best = tally.best.map(|(min_slack, index, failing)| BestCandidate {
        params: grid
            .axes
            .iter()
            .map(|a| a.name.clone())
            .zip(point(index))
            .collect(),
        min_slack,
        failing,
    });
    let ansatz = match n {
        1 => "three regions (n = 1), no symmetry assumed; Rankine-Hugoniot equalities solved exactly, \
              energy flux chosen to maximize the smallest entropy slack",
        _ => "four regions (n = 2), mirror-symmetric ansatz with speeds (-b, 0, b) and region 2 the \
              x-reflection of region 1; Rankine-Hugoniot equalities solved exactly, energy flux chosen \
              to maximize the smallest entropy slack",
    };
    Ok(ScanSummary {
        label: EVIDENCE_LABEL.into(),
        interior_regions: n,
        ansatz: ansatz.into(),
        grid: grid.clone(),
        seed,
        evaluated: tally.evaluated,
        feasible: tally.feasible,
        pass_counts,
        best,
        verdict: if tally.feasible == 0 {
            "no feasible point found".into()
        } else {
            format!("{} feasible points found", tally.feasible)
        },
    })
}

fn build(env: &Context<'_>, n: usize, x: &[f64]) -> Result<FanSubsolution> {
    match n {
        1 => env.three_regions(x),
        _ => env.four_regions(x),
    }
}
