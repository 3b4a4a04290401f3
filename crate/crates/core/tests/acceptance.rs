//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use fansub::explorer::{evaluate_cell, scan_feasibility, GridSpec, Range};
use fansub::infeasibility::{n_region_scan, three_region_certificate, AnsatzGrid, EVIDENCE_LABEL};
use fansub::states::Sym2;
use fansub::verifier::{eigen_check, ConditionKind};
use fansub::{
    construct, Construction, FanState, PotentialContext, PressureLaw, SelectorOptions,
    SymmetricContactDatum, Tolerances,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GAMMAS: [f64; 4] = [1.0, 1.4, 2.0, 3.0];
const RHO0S: [f64; 3] = [0.5, 1.0, 2.0];
const U0S: [f64; 6] = [-5.0, -1.0, -0.3, 0.3, 1.0, 5.0];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// `p(ρ) = ρ^1.5 + ρ/2` sampled at 80 log-spaced points on `[0.2, 5]`.
fn tabulated_law() -> PressureLaw {
    let n = 80;
    let (lo, hi) = (0.2f64.ln(), 5f64.ln());
    let samples: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let rho = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
            (rho, rho.powf(1.5) + 0.5 * rho)
        })
        .collect();
    PressureLaw::tabulated(&samples).unwrap()
}

fn laws() -> Vec<(String, PressureLaw)> {
    let mut out: Vec<(String, PressureLaw)> = GAMMAS
        .iter()
        .map(|&g| {
            (
                format!("gamma={g}"),
                PressureLaw::polytropic(1.0, g).unwrap(),
            )
        })
        .collect();
    out.push(("tabulated".into(), tabulated_law()));
    out
}

fn data() -> Vec<SymmetricContactDatum> {
    RHO0S
        .iter()
        .flat_map(|&r| {
            U0S.iter()
                .map(move |&u| SymmetricContactDatum::new(r, u).unwrap())
        })
        .collect()
}

struct Case {
    name: String,
    law: PressureLaw,
    datum: SymmetricContactDatum,
}

fn battery() -> Vec<Case> {
    laws()
        .into_iter()
        .flat_map(|(lname, law)| {
            data().into_iter().map(move |d| Case {
                name: format!("{lname} rho0={} u0={}", d.rho0, d.u0),
                law: law.clone(),
                datum: d,
            })
        })
        .collect()
}

fn build(case: &Case, rho_star: f64) -> Result<Construction, String> {
    let ctx = PotentialContext::new(rho_star).map_err(|e| e.to_string())?;
    construct(
        &case.datum,
        &case.law,
        &ctx,
        &SelectorOptions::default(),
        &Tolerances::default(),
    )
    .map_err(|e| format!("{}: {e}", case.name))
}

fn rel_close(x: f64, y: f64, rel: f64) -> bool {
    x == y || (x - y).abs() <= rel * x.abs().max(y.abs())
}

fn criterion_1() -> Outcome {
    let law = PressureLaw::polytropic(1.0, 2.0).unwrap();
    let datum = SymmetricContactDatum::new(1.0, 1.0).unwrap();
    let ctx = PotentialContext::new(1.0).unwrap();
    let opts = SelectorOptions::with_theta(0.1).unwrap();
    let start = Instant::now();
    let c =
        construct(&datum, &law, &ctx, &opts, &Tolerances::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();

    // Exact rational forms: ρ1 = 113/112, 2·112²·q1 = 113·112 + 4·112 + 112² + 113².
    let b = 3f64.sqrt();
    let q1_oracle =
        (113.0 * 112.0 + 4.0 * 112.0 + 112.0 * 112.0 + 113.0 * 113.0) / (2.0 * 112.0 * 112.0);
    let s = &c.selection;
    let checks = [
        ("b", s.b, b),
        ("eps", s.epsilon.value(), 0.0625),
        ("a", s.a, b / 8.0),
        ("rho1", s.params.rho1, 113.0 / 112.0),
        ("rho2", c.subsolution.interior[1].rho, 0.9375),
        ("q2", s.params.q2, 1.189453125),
        ("q1", s.params.q1, q1_oracle),
    ];
    for (name, got, want) in checks {
        ensure!(
            rel_close(got, want, 1e-9),
            "{name} = {got}, expected {want}"
        );
    }
    ensure!(
        (s.params.q1 - 1.5312899).abs() < 1e-7,
        "q1 = {} vs 1.5312899",
        s.params.q1
    );
    ensure!(
        c.report.all_pass,
        "verifier failed: {:?}",
        c.report.failing().collect::<Vec<_>>()
    );
    ensure!(
        c.report.conditions.len() == 28,
        "{} conditions",
        c.report.conditions.len()
    );
    ensure!(elapsed < 0.1, "construct took {elapsed:.3} s");
    Ok(format!(
        "b, eps, a, rho1, rho2, q1, q2 within 1e-9; 28/28 conditions pass; {:.2} ms",
        elapsed * 1e3
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let cases = battery();
    let mut worst_eq = 0f64;
    let mut worst_ext = 0f64;
    let mut min_strict = f64::INFINITY;
    for case in &cases {
        let c = build(case, case.datum.rho0)?;
        let r = &c.report;
        ensure!(
            r.all_pass,
            "{}: failing {:?}",
            case.name,
            r.failing().map(|c| &c.id).collect::<Vec<_>>()
        );
        for cond in &r.conditions {
            let id = cond.id.as_str();
            if id.starts_with("rh.") {
                let rel = cond.slack.abs() / cond.scale();
                worst_eq = worst_eq.max(rel);
                ensure!(rel <= 1e-9, "{}: {id} relative residual {rel:e}", case.name);
            } else if id == "entropy.iface0" || id == "entropy.iface3" {
                let rel = cond.slack.abs() / cond.scale();
                worst_ext = worst_ext.max(rel);
                ensure!(
                    rel <= 1e-9,
                    "{}: {id} slack {:e} not zero",
                    case.name,
                    cond.slack
                );
            } else if id.starts_with("entropy.") || id.starts_with("subsol.") {
                min_strict = min_strict.min(cond.slack);
                ensure!(
                    cond.slack > 1e-12,
                    "{}: {id} slack {:e}",
                    case.name,
                    cond.slack
                );
            }
        }
        for (k, s) in c.subsolution.interior.iter().enumerate() {
            ensure!(s.rho > 0.0, "{}: rho{} = {}", case.name, k + 1, s.rho);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure!(elapsed < 10.0, "battery took {elapsed:.2} s");
    Ok(format!(
        "{} cases; max RH residual {worst_eq:.1e}, max exterior entropy slack {worst_ext:.1e}, min strict slack {min_strict:.3e}; {elapsed:.2} s",
        cases.len()
    ))
}

/// Larger root of the characteristic polynomial, independent of the library.
fn lambda_oracle(m: &Sym2) -> f64 {
    let half_tr = 0.5 * (m.m11 + m.m22);
    let det = m.m11 * m.m22 - m.m12 * m.m12;
    half_tr + (half_tr * half_tr - det).max(0.0).sqrt()
}

fn criterion_3() -> Outcome {
    let mut compared = 0;
    for case in battery() {
        let c = build(&case, case.datum.rho0)?;
        for e in &c.eigen {
            ensure!(e.agrees, "{} region {}: {e:?}", case.name, e.region);
            ensure!(
                e.lambda_max < 0.0,
                "{} region {}: lambda_max {}",
                case.name,
                e.region,
                e.lambda_max
            );
            compared += usize::from(!e.marginal);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut random_compared = 0;
    for _ in 0..1000 {
        let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
        let m = Sym2::new(
            scale * rng.gen_range(-1.0..1.0),
            scale * rng.gen_range(-1.0..1.0),
            scale * rng.gen_range(-1.0..1.0),
        );
        let lib = m.lambda_max();
        let oracle = lambda_oracle(&m);
        ensure!(
            (lib - oracle).abs() <= 1e-9 * (m.m11.abs() + m.m12.abs() + m.m22.abs()),
            "lambda_max {lib} vs oracle {oracle} for {m:?}"
        );
        let tr = m.m11 + m.m22;
        let det = m.m11 * m.m22 - m.m12 * m.m12;
        if lib.abs() >= 1e-10 && tr.abs() >= 1e-10 && det.abs() >= 1e-10 {
            random_compared += 1;
            let by_test = tr < 0.0 && det > 0.0;
            ensure!((lib < 0.0) == by_test, "sign mismatch for {m:?}");
            ensure!(
                eigen_check(0, &m, 1e-10).agrees,
                "eigen_check disagrees for {m:?}"
            );
        }
    }
    Ok(format!(
        "{compared} battery regions and {random_compared}/1000 random matrices compared, all agree"
    ))
}

fn criterion_4() -> Outcome {
    let mut worst_rel = 0f64;
    let mut worst_zero = 0f64;
    let mut compared = 0;
    for case in battery() {
        let base = build(&case, case.datum.rho0)?;
        for rho_star in [case.datum.rho0 / 2.0, 2.0 * case.datum.rho0] {
            let other = build(&case, rho_star)?;
            let (s0, s1) = (&base.selection, &other.selection);
            ensure!(
                s0.epsilon == s1.epsilon && s0.a == s1.a,
                "{} rho*={rho_star}: selection changed ({:?}, {}) -> ({:?}, {})",
                case.name,
                s0.epsilon,
                s0.a,
                s1.epsilon,
                s1.a
            );
            ensure!(
                s0.families == s1.families,
                "{} rho*={rho_star}: family slacks changed",
                case.name
            );
            for (c0, c1) in base.report.conditions.iter().zip(&other.report.conditions) {
                if c0.kind == ConditionKind::Equality {
                    continue;
                }
                ensure!(c0.id == c1.id, "condition order differs");
                compared += 1;
                let diff = (c0.slack - c1.slack).abs();
                let mag = c0.slack.abs().max(c1.slack.abs());
                // Zero-slack conditions are compared at round-off level.
                if diff <= 1e-9 * mag {
                    worst_rel = worst_rel.max(if mag > 0.0 { diff / mag } else { 0.0 });
                } else {
                    let floor = 1e-12 * c0.scale().max(c1.scale());
                    ensure!(
                        diff <= floor,
                        "{} rho*={rho_star}: {} slack {} -> {}",
                        case.name,
                        c0.id,
                        c0.slack,
                        c1.slack
                    );
                    worst_zero = worst_zero.max(diff / c0.scale().max(c1.scale()));
                }
            }
        }
    }
    Ok(format!(
        "(eps, a) unchanged; {compared} inequality slacks, max relative change {worst_rel:.1e}, zero-slack drift {worst_zero:.1e}·scale"
    ))
}

fn states_close(x: &FanState, y: &FanState, tol: f64) -> bool {
    let a = [x.rho, x.m[0], x.m[1], x.u.u11, x.u.u12, x.q, x.f[0], x.f[1]];
    let b = [y.rho, y.m[0], y.m[1], y.u.u11, y.u.u12, y.q, y.f[0], y.f[1]];
    a.iter().zip(&b).all(|(p, q)| rel_close(*p, *q, tol))
}

fn criterion_5() -> Outcome {
    let mut count = 0;
    for case in battery().into_iter().filter(|c| c.datum.u0 > 0.0) {
        let plus = build(&case, case.datum.rho0)?;
        let mirrored = Case {
            name: format!("{} mirrored", case.name),
            law: case.law.clone(),
            datum: case.datum.mirrored(),
        };
        let minus = build(&mirrored, case.datum.rho0)?;
        let reflected = plus.subsolution.x_reflection();
        let (p, q) = (&minus.subsolution, &reflected);
        ensure!(
            p.speeds
                .iter()
                .zip(&q.speeds)
                .all(|(x, y)| rel_close(*x, *y, 1e-12)),
            "{}: speeds differ",
            case.name
        );
        let pairs = p.chain().into_iter().zip(q.chain());
        for (k, (x, y)) in pairs.enumerate() {
            ensure!(
                states_close(x, y, 1e-12),
                "{}: state {k} differs: {x:?} vs {y:?}",
                case.name
            );
        }
        count += 1;
    }
    Ok(format!("{count} datum pairs match field-by-field to 1e-12"))
}

fn criterion_6() -> Outcome {
    let mut worst = 0f64;
    let cases = battery();
    for case in &cases {
        let c = build(case, case.datum.rho0)?;
        let expected = case.datum.rho0 - c.selection.epsilon.value();
        let err = (c.subsolution.interior[1].rho - expected).abs();
        worst = worst.max(err);
        ensure!(err <= 1e-14, "{}: rho2 off by {err:e}", case.name);
    }
    Ok(format!(
        "{} cases, max |rho2 - (rho0 - eps)| = {worst:.1e}",
        cases.len()
    ))
}

fn criterion_7() -> Outcome {
    let cases = battery();
    for case in &cases {
        let cert = three_region_certificate(&case.datum, &case.law).map_err(|e| e.to_string())?;
        ensure!(
            cert.det_lhs == 0.0,
            "{}: det_lhs = {}",
            case.name,
            cert.det_lhs
        );
        ensure!(
            cert.conclusion == "infeasible",
            "{}: {}",
            case.name,
            cert.conclusion
        );
    }
    Ok(format!(
        "{} data, det_lhs = 0 exactly, conclusion infeasible",
        cases.len()
    ))
}

fn criterion_8() -> Outcome {
    let law = PressureLaw::polytropic(1.0, 2.0).unwrap();
    let datum = SymmetricContactDatum::new(1.0, 1.0).unwrap();
    let grid = AnsatzGrid::default_for(2, &datum, &law).map_err(|e| e.to_string())?;
    ensure!(
        grid.grid_cells() == 100_000,
        "default grid has {} cells",
        grid.grid_cells()
    );
    let start = Instant::now();
    let summary = n_region_scan(&datum, &law, 2, &grid, 0).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure!(summary.feasible == 0, "{} feasible cells", summary.feasible);
    ensure!(
        summary.label == EVIDENCE_LABEL && EVIDENCE_LABEL == "numerical evidence",
        "label {:?}",
        summary.label
    );
    ensure!(elapsed < 60.0, "scan took {elapsed:.1} s");
    Ok(format!(
        "{} candidates ({} grid cells), 0 feasible, labelled {:?}; {elapsed:.2} s",
        summary.evaluated,
        grid.grid_cells(),
        summary.label
    ))
}

/// Bisection on `6ε + ε² = 1/2`.
fn epsilon_root() -> f64 {
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 6.0 * mid + mid * mid < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn criterion_9() -> Outcome {
    let law = PressureLaw::polytropic(1.0, 2.0).unwrap();
    let datum = SymmetricContactDatum::new(1.0, 1.0).unwrap();
    let ctx = PotentialContext::new(1.0).unwrap();
    let c = construct(
        &datum,
        &law,
        &ctx,
        &SelectorOptions::default(),
        &Tolerances::default(),
    )
    .map_err(|e| e.to_string())?;
    let (a, eps, b) = (c.selection.a, c.selection.epsilon.value(), c.selection.b);
    let cell = evaluate_cell(&datum, &law, &ctx, b, a, eps);
    ensure!(
        cell.feasible,
        "selector point ({a}, {eps}) is not feasible: {cell:?}"
    );

    let root = epsilon_root();
    ensure!((root - 0.082207).abs() < 1e-6, "bisection root {root}");
    let mut feasible = 0;
    let mut max_eps = 0f64;
    let grids = [
        GridSpec::default_for(b, datum.rho0),
        GridSpec {
            a_range: Range::new(0.005 * b, 0.5 * b, 100),
            eps_range: Range::new(0.07, 0.12, 201),
            cap: 1_000_000,
        },
    ];
    for grid in &grids {
        let table = scan_feasibility(&datum, &law, &ctx, grid).map_err(|e| e.to_string())?;
        for cell in table.cells.iter().filter(|c| c.feasible) {
            feasible += 1;
            max_eps = max_eps.max(cell.eps);
            ensure!(
                cell.eps <= root,
                "feasible cell at eps = {} > {root}",
                cell.eps
            );
        }
    }
    ensure!(feasible > 0, "no feasible cells at all");
    ensure!(max_eps < 0.0823, "feasible eps {max_eps}");
    Ok(format!(
        "selector point feasible; {feasible} feasible cells, largest eps {max_eps:.5} <= root {root:.6}"
    ))
}

fn fansub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fansub"))
        .args(args)
        .output()
        .expect("failed to run the fansub binary")
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run_dir = |name: &str| dir.path().join(name);
    let golden = ["--pressure", "polytropic:1,2", "--rho0", "1", "--u0", "1"];
    for name in ["c1", "c2"] {
        let out = run_dir(name);
        let mut args = vec!["construct"];
        args.extend(golden);
        args.extend(["--out-dir", out.to_str().unwrap()]);
        let o = fansub(&args);
        ensure!(
            o.status.code() == Some(0),
            "construct exited {:?}",
            o.status.code()
        );
    }
    for name in ["s1", "s2"] {
        let out = run_dir(name);
        let mut args = vec!["scan"];
        args.extend(golden);
        args.extend(["--out-dir", out.to_str().unwrap()]);
        let o = fansub(&args);
        ensure!(
            o.status.code() == Some(0),
            "scan exited {:?}",
            o.status.code()
        );
    }
    for name in ["i1.json", "i2.json"] {
        let out = run_dir(name);
        let mut args = vec!["infeasible", "--n", "2", "--seed", "7", "--samples", "200"];
        args.extend(golden);
        args.extend(["--out", out.to_str().unwrap()]);
        let o = fansub(&args);
        ensure!(
            o.status.code() == Some(0),
            "infeasible exited {:?}",
            o.status.code()
        );
    }
    let pairs = [
        ("c1/subsolution.json", "c2/subsolution.json"),
        ("c1/report.json", "c2/report.json"),
        ("s1/scan.csv", "s2/scan.csv"),
        ("s1/scan.svg", "s2/scan.svg"),
        ("i1.json", "i2.json"),
    ];
    for (x, y) in pairs {
        ensure!(read(&run_dir(x)) == read(&run_dir(y)), "{x} and {y} differ");
    }
    Ok(
        "construct JSON, scan CSV/SVG and seeded infeasibility JSON byte-identical across runs"
            .into(),
    )
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("golden");
    let o = fansub(&[
        "construct",
        "--pressure",
        "polytropic:1,2",
        "--rho0",
        "1",
        "--u0",
        "1",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    ensure!(
        o.status.code() == Some(0),
        "construct exited {:?}",
        o.status.code()
    );
    let candidate = out.join("subsolution.json");
    let o = fansub(&[
        "verify",
        "--candidate",
        candidate.to_str().unwrap(),
        "--pressure",
        "polytropic:1,2",
    ]);
    ensure!(
        o.status.code() == Some(0),
        "verify exited {:?}",
        o.status.code()
    );

    let bad_cases: [(&[&str], &str); 3] = [
        (&["--rho0", "1", "--u0", "0"], "u0 != 0"),
        (&["--rho0", "0", "--u0", "1"], "rho0 must be finite and > 0"),
        (
            &["--rho0", "-1", "--u0", "1"],
            "rho0 must be finite and > 0",
        ),
    ];
    for (flags, needle) in bad_cases {
        let mut args = vec!["construct", "--pressure", "polytropic:1,2"];
        args.extend(flags);
        let o = fansub(&args);
        let stderr = String::from_utf8_lossy(&o.stderr);
        ensure!(
            o.status.code() == Some(2),
            "{flags:?} exited {:?}",
            o.status.code()
        );
        ensure!(
            stderr.contains(needle),
            "{flags:?}: stderr lacks {needle:?}: {stderr}"
        );
    }
    let config = dir.path().join("zero.json");
    std::fs::write(
        &config,
        r#"{"pressure": {"type": "polytropic", "K": 1, "gamma": 2}, "rho0": 1, "u0": 0}"#,
    )
    .map_err(|e| e.to_string())?;
    let o = fansub(&["construct", "--config", config.to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&o.stderr);
    ensure!(
        o.status.code() == Some(2) && stderr.contains("u0 != 0"),
        "config file u0 = 0: {stderr}"
    );
    Ok("round-trip exits 0; u0 = 0 and rho0 <= 0 exit 2 naming the hypothesis".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("golden construction (gamma = 2)", criterion_1),
        ("battery feasibility", criterion_2),
        ("eigenvalue oracle equivalence", criterion_3),
        ("rho* invariance", criterion_4),
        ("mirror symmetry", criterion_5),
        ("rho2 = rho0 - eps identity", criterion_6),
        ("three-region certificate", criterion_7),
        ("four-region scan", criterion_8),
        ("explorer consistency", criterion_9),
        ("determinism", criterion_10),
        ("CLI contract", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
