//! Command-line front end: `construct`, `verify`, `scan` and `infeasible`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration or schema
//! error, 3 selection exhausted.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::explorer::{emit_csv, emit_heatmap, scan_feasibility, GridSpec};
use crate::infeasibility::{n_region_scan, three_region_certificate, AnsatzGrid, EVIDENCE_LABEL};
use crate::pressure::{PotentialContext, PressureLaw};
use crate::reduction::FanSubsolution;
use crate::selector::{choose_b, construct, Selection, SelectorOptions};
use crate::states::{FanState, SymmetricContactDatum};
use crate::verifier::{verify, EigenCheck, Tolerances, VerificationReport};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_EXHAUSTED: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fansub",
    version,
    about = "Admissible fan subsolutions for contact-discontinuity Riemann data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select parameters, build the five-region subsolution and verify it.
    Construct {
        #[command(flatten)]
        config: ConfigArgs,
        /// Directory for subsolution.json and report.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Verify a candidate subsolution read from JSON.
    Verify {
        #[arg(long)]
        candidate: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        /// Report path; defaults to `<candidate>.report.json`.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Feasibility map over (a, eps) written as CSV and SVG.
    Scan {
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Directory for scan.csv and scan.svg.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Three-region certificate (--n 1) or four-region scan (--n 2).
    Infeasible {
        #[command(flatten)]
        config: ConfigArgs,
        /// Number of interior regions.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples added to the grid scan.
        #[arg(long)]
        samples: Option<usize>,
        /// Optional JSON output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `polytropic:K,gamma` or `tabulated:path.csv`.
    #[arg(long)]
    pub pressure: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub u0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho_star: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub tol_eq: Option<f64>,
    #[arg(long)]
    pub tol_strict: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub a_min: Option<f64>,
    #[arg(long)]
    pub a_max: Option<f64>,
    #[arg(long)]
    pub a_count: Option<usize>,
    #[arg(long)]
    pub eps_min: Option<f64>,
    #[arg(long)]
    pub eps_max: Option<f64>,
    #[arg(long)]
    pub eps_count: Option<usize>,
    /// Maximum number of cells.
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PressureConfig {
    Polytropic {
        #[serde(rename = "K")]
        k: f64,
        gamma: f64,
    },
    Tabulated {
        csv_path: PathBuf,
    },
}

impl PressureConfig {
    fn parse_flag(s: &str) -> Result<Self, String> {
        let bad = || format!("--pressure expects polytropic:K,gamma or tabulated:PATH, got {s:?}");
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "polytropic" => {
                let (k, g) = rest.split_once(',').ok_or_else(bad)?;
                let k = k.trim().parse().map_err(|_| bad())?;
                let gamma = g.trim().parse().map_err(|_| bad())?;
                Ok(Self::Polytropic { k, gamma })
            }
            "tabulated" if !rest.is_empty() => Ok(Self::Tabulated {
                csv_path: rest.into(),
            }),
            _ => Err(bad()),
        }
    }

    fn build(&self) -> crate::Result<PressureLaw> {
        match self {
            Self::Polytropic { k, gamma } => PressureLaw::polytropic(*k, *gamma),
            Self::Tabulated { csv_path } => PressureLaw::from_csv(csv_path),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToleranceOverrides {
    tol_eq: Option<f64>,
    tol_strict: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputConfig {
    dir: Option<PathBuf>,
}

/// On-disk config; every field may also come from a flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    pressure: Option<PressureConfig>,
    rho0: Option<f64>,
    u0: Option<f64>,
    rho_star: Option<f64>,
    theta: Option<f64>,
    #[serde(default)]
    tolerances: ToleranceOverrides,
    #[serde(default)]
    output: OutputConfig,
}

/// Resolved scientific configuration, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub pressure: PressureConfig,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rho0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub u0: Option<f64>,
    pub rho_star: f64,
    pub theta: f64,
    pub tolerances: Tolerances,
}

/// A validated run: the echo plus the built objects.
#[derive(Debug)]
struct Run {
    echo: RunConfig,
    law: PressureLaw,
    datum: Option<SymmetricContactDatum>,
    ctx: PotentialContext,
    opts: SelectorOptions,
    tol: Tolerances,
    out_dir: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Config(Vec<String>),
    Schema { pointer: String, message: String },
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(Error::SelectionExhausted { .. }) => EXIT_EXHAUSTED,
            Failure::Lib(Error::InternalConsistency { .. }) => EXIT_VERIFY_FAILED,
            _ => EXIT_CONFIG,
        }
    }

    fn report(&self) {
        match self {
            Failure::Config(problems) => {
                eprintln!(
                    "error: invalid configuration ({} problem(s)):",
                    problems.len()
                );
                for p in problems {
                    eprintln!("  - {p}");
                }
            }
            Failure::Schema { pointer, message } => {
                eprintln!("error: candidate does not match schema at {pointer:?}: {message}");
            }
            Failure::Lib(e) => eprintln!("error: {e}"),
        }
    }
}

fn read_config_file(path: &Path) -> Result<ConfigFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let mut file: ConfigFile = serde_path_to_error::deserialize(de).map_err(|e| {
        Failure::Config(vec![format!(
            "{}: {} at {}",
            path.display(),
            e.inner(),
            json_pointer(e.path())
        )])
    })?;
    // Relative table paths are taken relative to the config file.
    if let Some(PressureConfig::Tabulated { csv_path }) = &mut file.pressure {
        if csv_path.is_relative() {
            if let Some(dir) = path.parent() {
                *csv_path = dir.join(&*csv_path);
            }
        }
    }
    Ok(file)
}

/// Merges file and flags and validates everything at once. `rho_star`
/// falls back to `rho0`, then to `fallback_rho_star`.
fn resolve(
    args: &ConfigArgs,
    needs_datum: bool,
    fallback_rho_star: Option<f64>,
) -> Result<Run, Failure> {
    let file = match &args.config {
        Some(p) => read_config_file(p)?,
        None => ConfigFile::default(),
    };
    let mut problems = Vec::new();

    let pressure = match &args.pressure {
        Some(s) => match PressureConfig::parse_flag(s) {
            Ok(p) => Some(p),
            Err(msg) => {
                problems.push(msg);
                None
            }
        },
        None => file.pressure.clone(),
    };
    let law = match &pressure {
        Some(p) => match p.build() {
            Ok(law) => Some(law),
            Err(e) => {
                problems.push(e.to_string());
                None
            }
        },
        None => {
            problems.push(
                "a pressure law is required (--pressure or \"pressure\" in the config)".into(),
            );
            None
        }
    };

    let rho0 = args.rho0.or(file.rho0);
    let u0 = args.u0.or(file.u0);
    let datum = match (rho0, u0) {
        (Some(r), Some(u)) => match SymmetricContactDatum::new(r, u) {
            Ok(d) => Some(d),
            Err(e) => {
                problems.push(e.to_string());
                None
            }
        },
        _ => {
            if needs_datum {
                if rho0.is_none() {
                    problems.push("rho0 is required (--rho0 or \"rho0\")".into());
                }
                if u0.is_none() {
                    problems.push("u0 is required (--u0 or \"u0\")".into());
                }
            }
            if let Some(r) = rho0.filter(|r| !(*r > 0.0)) {
                problems.push(format!(
                    "invalid Riemann datum: rho0 must be finite and > 0, got {r}"
                ));
            }
            None
        }
    };

    let rho_star = args
        .rho_star
        .or(file.rho_star)
        .or(rho0.filter(|r| *r > 0.0))
        .or(fallback_rho_star);
    let ctx = match rho_star {
        Some(r) => match PotentialContext::new(r) {
            Ok(c) => Some(c),
            Err(e) => {
                problems.push(e.to_string());
                None
            }
        },
        None => {
            problems.push("rho_star is required when rho0 is not given".into());
            None
        }
    };

    let theta = args
        .theta
        .or(file.theta)
        .unwrap_or(SelectorOptions::default().theta);
    let opts = match SelectorOptions::with_theta(theta) {
        Ok(o) => Some(o),
        Err(e) => {
            problems.push(e.to_string());
            None
        }
    };

    let defaults = Tolerances::default();
    let tol = Tolerances {
        tol_eq: args
            .tol_eq
            .or(file.tolerances.tol_eq)
            .unwrap_or(defaults.tol_eq),
        tol_strict: args
            .tol_strict
            .or(file.tolerances.tol_strict)
            .unwrap_or(defaults.tol_strict),
    };
    for (name, v) in [("tol_eq", tol.tol_eq), ("tol_strict", tol.tol_strict)] {
        if !(v.is_finite() && v >= 0.0) {
            problems.push(format!("{name} must be finite and >= 0, got {v}"));
        }
    }

    match (pressure, law, ctx, opts) {
        (Some(pressure), Some(law), Some(ctx), Some(opts)) if problems.is_empty() => Ok(Run {
            echo: RunConfig {
                pressure,
                rho0,
                u0,
                rho_star: ctx.rho_star,
                theta,
                tolerances: tol,
            },
            law,
            datum,
            ctx,
            opts,
            tol,
            out_dir: file.output.dir,
        }),
        _ => Err(Failure::Config(problems)),
    }
}

/// Candidate document: states keyed `left`, `r1` … `rN`, `right`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateDocument {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rho_star: Option<f64>,
    pub speeds: Vec<f64>,
    pub states: BTreeMap<String, FanState>,
}

impl CandidateDocument {
    pub fn from_subsolution(sub: &FanSubsolution, rho_star: Option<f64>) -> Self {
        let mut states = BTreeMap::new();
        states.insert("left".to_string(), sub.left);
        states.insert("right".to_string(), sub.right);
        for (i, s) in sub.interior.iter().enumerate() {
            states.insert(format!("r{}", i + 1), *s);
        }
        Self {
            schema_version: SCHEMA_VERSION,
            rho_star,
            speeds: sub.speeds.clone(),
            states,
        }
    }

    fn to_subsolution(&self) -> Result<FanSubsolution, Failure> {
        let schema = |pointer: String, message: String| Failure::Schema { pointer, message };
        if self.schema_version != SCHEMA_VERSION {
            return Err(schema(
                "/schema_version".into(),
                format!("expected {SCHEMA_VERSION}, got {}", self.schema_version),
            ));
        }
        let take = |name: &str| {
            self.states
                .get(name)
                .copied()
                .ok_or_else(|| schema(format!("/states/{name}"), "missing region".into()))
        };
        let left = take("left")?;
        let right = take("right")?;
        let n = self.states.len() - 2;
        if n == 0 {
            return Err(schema("/states".into(), "no interior regions".into()));
        }
        let interior = (1..=n)
            .map(|i| take(&format!("r{i}")))
            .collect::<Result<Vec<_>, _>>()?;
        if self.speeds.len() != n + 1 {
            return Err(schema(
                "/speeds".into(),
                format!(
                    "{n} interior regions need {} speeds, got {}",
                    n + 1,
                    self.speeds.len()
                ),
            ));
        }
        let sub = FanSubsolution {
            speeds: self.speeds.clone(),
            left,
            interior,
            right,
        };
        sub.check_shape()?;
        Ok(sub)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub report: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub selection: Option<Selection>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub eigen: Vec<EigenCheck>,
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Config(vec![format!("cannot serialize {}: {e}", path.display())]))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e).into())
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e).into())
}

fn require_datum(run: &Run) -> Result<SymmetricContactDatum, Failure> {
    run.datum
        .ok_or_else(|| Failure::Config(vec!["rho0 and u0 are required".into()]))
}

pub fn print_report(report: &VerificationReport) {
    println!(
        "{:<22} {:<9} {:>15} {:>15} {:>15}  pass",
        "condition", "kind", "lhs", "rhs", "slack"
    );
    for c in &report.conditions {
        let kind = match c.kind {
            crate::verifier::ConditionKind::Equality => "equality",
            crate::verifier::ConditionKind::Strict => "strict",
            crate::verifier::ConditionKind::Nonstrict => "nonstrict",
        };
        println!(
            "{:<22} {:<9} {:>15.6e} {:>15.6e} {:>15.6e}  {}",
            c.id,
            kind,
            c.lhs,
            c.rhs,
            c.slack,
            if c.pass { "yes" } else { "NO" }
        );
    }
    let failing = report.failing().count();
    println!(
        "{} conditions, {} failing: {}",
        report.conditions.len(),
        failing,
        if report.all_pass { "PASS" } else { "FAIL" }
    );
}

fn cmd_construct(config: &ConfigArgs, out_dir: Option<PathBuf>) -> Result<u8, Failure> {
    let run = resolve(config, true, None)?;
    let datum = require_datum(&run)?;
    let dir = out_dir
        .or(run.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    ensure_dir(&dir)?;
    let report_path = dir.join("report.json");
    match construct(&datum, &run.law, &run.ctx, &run.opts, &run.tol) {
        Ok(c) => {
            let doc = CandidateDocument::from_subsolution(&c.subsolution, Some(run.ctx.rho_star));
            write_json(&dir.join("subsolution.json"), &doc)?;
            let report = ReportDocument {
                schema_version: SCHEMA_VERSION,
                command: "construct".into(),
                config: run.echo.clone(),
                report: c.report.clone(),
                selection: Some(c.selection.clone()),
                eigen: c.eigen.clone(),
            };
            write_json(&report_path, &report)?;
            let s = &c.selection;
            println!(
                "law {}, rho0 = {}, u0 = {}, rho* = {}",
                run.law, datum.rho0, datum.u0, run.ctx.rho_star
            );
            println!(
                "b = {:.17e}, eps = {:.17e}, a = {:.17e}",
                s.b,
                s.epsilon.value(),
                s.a
            );
            println!(
                "rho1 = {:.17e}, rho2 = {:.17e}, q1 = {:.17e}, q2 = {:.17e}",
                s.params.rho1,
                s.params.rho2(datum.rho0),
                s.params.q1,
                s.params.q2
            );
            print_report(&c.report);
            Ok(EXIT_OK)
        }
        Err(Error::InternalConsistency { report }) => {
            let doc = ReportDocument {
                schema_version: SCHEMA_VERSION,
                command: "construct".into(),
                config: run.echo.clone(),
                report: (*report).clone(),
                selection: None,
                eigen: Vec::new(),
            };
            write_json(&report_path, &doc)?;
            print_report(&report);
            Ok(EXIT_VERIFY_FAILED)
        }
        Err(e) => Err(e.into()),
    }
}

fn read_candidate(path: &Path) -> Result<CandidateDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| Failure::Schema {
        pointer: json_pointer(e.path()),
        message: e.inner().to_string(),
    })
}

fn cmd_verify(
    candidate: &Path,
    config: &ConfigArgs,
    report: Option<PathBuf>,
) -> Result<u8, Failure> {
    let doc = read_candidate(candidate)?;
    let sub = doc.to_subsolution()?;
    let run = resolve(config, false, doc.rho_star.or(Some(sub.left.rho)))?;
    let mut result = verify(&sub, &run.law, &run.ctx, &run.tol)?;
    result.context.datum = run.datum;
    let path = report.unwrap_or_else(|| {
        let mut name = candidate.as_os_str().to_owned();
        name.push(".report.json");
        PathBuf::from(name)
    });
    let out = ReportDocument {
        schema_version: SCHEMA_VERSION,
        command: "verify".into(),
        config: run.echo,
        report: result,
        selection: None,
        eigen: Vec::new(),
    };
    write_json(&path, &out)?;
    print_report(&out.report);
    Ok(if out.report.all_pass {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn cmd_scan(config: &ConfigArgs, grid: &GridArgs, out_dir: Option<PathBuf>) -> Result<u8, Failure> {
    let run = resolve(config, true, None)?;
    let datum = require_datum(&run)?;
    let b = choose_b(&run.law, datum.rho0)?;
    let mut spec = GridSpec::default_for(b, datum.rho0);
    let ar = &mut spec.a_range;
    ar.low = grid.a_min.unwrap_or(ar.low);
    ar.high = grid.a_max.unwrap_or(ar.high);
    ar.count = grid.a_count.unwrap_or(ar.count);
    let er = &mut spec.eps_range;
    er.low = grid.eps_min.unwrap_or(er.low);
    er.high = grid.eps_max.unwrap_or(er.high);
    er.count = grid.eps_count.unwrap_or(er.count);
    spec.cap = grid.cap.unwrap_or(spec.cap);

    let table = scan_feasibility(&datum, &run.law, &run.ctx, &spec)?;
    let dir = out_dir
        .or(run.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    ensure_dir(&dir)?;
    let (csv_path, svg_path) = (dir.join("scan.csv"), dir.join("scan.svg"));
    emit_csv(&table, &csv_path)?;
    emit_heatmap(&table, &svg_path)?;
    let feasible = table.cells.iter().filter(|c| c.feasible).count();
    println!(
        "law {}, rho0 = {}, u0 = {}, b = {:.17e}",
        run.law, datum.rho0, datum.u0, b
    );
    println!("{} cells, {} feasible", table.cells.len(), feasible);
    if let Some(max_eps) = table
        .cells
        .iter()
        .filter(|c| c.feasible)
        .map(|c| c.eps)
        .reduce(f64::max)
    {
        println!("largest feasible eps: {max_eps:.6e}");
    }
    println!("wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(EXIT_OK)
}

fn cmd_infeasible(
    config: &ConfigArgs,
    n: usize,
    seed: u64,
    samples: Option<usize>,
    out: Option<PathBuf>,
) -> Result<u8, Failure> {
    let run = resolve(config, true, None)?;
    let datum = require_datum(&run)?;
    match n {
        1 => {
            let cert = three_region_certificate(&datum, &run.law)?;
            println!(
                "three-region fan ({} interior region): {}",
                n, cert.conclusion
            );
            for (i, step) in cert.derivation.iter().enumerate() {
                println!("  {}. {}", i + 1, step);
            }
            for f in &cert.forced {
                println!(
                    "  forced {} = {} = {:.17e}",
                    f.symbol, f.expression, f.value
                );
            }
            println!(
                "  determinant: lhs = {:e}, rhs >= {:e}; strict lhs > rhs cannot hold",
                cert.det_lhs, cert.det_rhs_lower_bound
            );
            if let Some(p) = out {
                write_json(&p, &cert)?;
            }
        }
        2 => {
            let mut grid = AnsatzGrid::default_for(n, &datum, &run.law)?;
            if let Some(s) = samples {
                grid.random_samples = s;
            }
            let summary = n_region_scan(&datum, &run.law, n, &grid, seed)?;
            println!(
                "[{}] four-region scan, ansatz {}",
                summary.label, summary.ansatz
            );
            println!(
                "evaluated {} candidates (seed {}), feasible {}",
                summary.evaluated, summary.seed, summary.feasible
            );
            for (id, count) in &summary.pass_counts {
                println!("  {id:<22} passed {count}");
            }
            if let Some(best) = &summary.best {
                println!(
                    "  best min slack {:.6e}, failing: {}",
                    best.min_slack,
                    best.failing.join(", ")
                );
            }
            println!("verdict: {} ({})", summary.verdict, EVIDENCE_LABEL);
            if let Some(p) = out {
                write_json(&p, &summary)?;
            }
        }
        _ => {
            // Same precondition message as the library.
            let _ = AnsatzGrid::default_for(n, &datum, &run.law)?;
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` and runs the selected command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK });
        }
    };
    let result = match cli.command {
        Command::Construct { config, out_dir } => cmd_construct(&config, out_dir),
        Command::Verify {
            candidate,
            config,
            report,
        } => cmd_verify(&candidate, &config, report),
        Command::Scan {
            config,
            grid,
            out_dir,
        } => cmd_scan(&config, &grid, out_dir),
        Command::Infeasible {
            config,
            n,
            seed,
            samples,
            out,
        } => cmd_infeasible(&config, n, seed, samples, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            f.report();
            ExitCode::from(f.exit_code())
        }
    }
}
