//! Feasibility map over `(a, ε)` at fixed `b = sqrt(p′(ρ0) + 1)`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pressure::{PotentialContext, PressureLaw};
use crate::reduction::reduce;
use crate::selector::{choose_b, derive_parameters, families, Families};
use crate::states::SymmetricContactDatum;
use crate::verifier::{verify, Tolerances};

pub const DEFAULT_CELL_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub low: f64,
    pub high: f64,
    pub count: usize,
}

impl Range {
    pub fn new(low: f64, high: f64, count: usize) -> Self {
        Self { low, high, count }
    }

    pub fn node(&self, i: usize) -> f64 {
        self.low + (self.high - self.low) * i as f64 / (self.count - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub a_range: Range,
    pub eps_range: Range,
    pub cap: usize,
}

impl GridSpec {
    /// 100 × 100 cells with `a ∈ [b/200, b/2]` and `ε ∈ [ρ0/200, ρ0/2]`.
    pub fn default_for(b: f64, rho0: f64) -> Self {
        Self {
            a_range: Range::new(0.005 * b, 0.5 * b, 100),
            eps_range: Range::new(0.005 * rho0, 0.5 * rho0, 100),
            cap: DEFAULT_CELL_CAP,
        }
    }

    pub fn cells(&self) -> usize {
        self.a_range.count.saturating_mul(self.eps_range.count)
    }

    pub fn validate(&self, b: f64, rho0: f64) -> Result<()> {
        let mut problems = Vec::new();
        let check = |name: &str, r: &Range, upper: f64, problems: &mut Vec<String>| {
            if !(r.low > 0.0 && r.low < r.high && r.high < upper) {
                problems.push(format!(
                    "{name} range must satisfy 0 < low < high < {upper}, got [{}, {}]",
                    r.low, r.high
                ));
            }
            if r.count < 2 {
                problems.push(format!("{name} count must be >= 2, got {}", r.count));
            }
        };
        check("a", &self.a_range, b, &mut problems);
        check("eps", &self.eps_range, rho0, &mut problems);
        if self.cells() > self.cap {
            problems.push(format!(
                "{} cells exceed the cap of {}",
                self.cells(),
                self.cap
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Grid(problems.join("; ")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub a: f64,
    pub eps: f64,
    pub feasible: bool,
    pub min_slack: f64,
    /// Slacks in [`Families::NAMES`] order; NaN when the cell could not be evaluated.
    pub slacks: [f64; 9],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityTable {
    pub b: f64,
    pub grid: GridSpec,
    pub cells: Vec<Cell>,
}

/// Evaluates one cell: all nine families must hold strictly (no safety
/// margin) and the verifier must pass the reduced subsolution.
pub fn evaluate_cell(
    datum: &SymmetricContactDatum,
    law: &PressureLaw,
    ctx: &PotentialContext,
    b: f64,
    a: f64,
    eps: f64,
) -> Cell {
    let run = || -> Result<(Families, bool)> {
        let fam = families(law, datum, b, a, eps)?;
        let params = derive_parameters(law, datum, b, a, eps)?;
        let sub = reduce(&params, datum, law, ctx)?;
        let report = verify(&sub, law, ctx, &Tolerances::default())?;
        Ok((fam, report.all_pass))
    };
    match run() {
        Ok((fam, verified)) => {
            let slacks = fam.slacks();
            Cell {
                a,
                eps,
                feasible: verified && slacks.iter().all(|s| *s > 0.0),
                min_slack: fam.min_slack(),
                slacks,
            }
        }
        Err(_) => Cell {
            a,
            eps,
            feasible: false,
            min_slack: f64::NAN,
            slacks: [f64::NAN; 9],
        },
    }
}

pub fn scan_feasibility(
    datum: &SymmetricContactDatum,
    law: &PressureLaw,
    ctx: &PotentialContext,
    grid: &GridSpec,
) -> Result<FeasibilityTable> {
    scan_feasibility_with(datum, law, ctx, grid, true)
}

/// Rows are `a`-major, then `ε`, whether or not the scan runs in parallel.
pub fn scan_feasibility_with(
    datum: &SymmetricContactDatum,
    law: &PressureLaw,
    ctx: &PotentialContext,
    grid: &GridSpec,
    parallel: bool,
) -> Result<FeasibilityTable> {
    let b = choose_b(law, datum.rho0)?;
    grid.validate(b, datum.rho0)?;
    let n_eps = grid.eps_range.count;
    let cell = |k: usize| {
        evaluate_cell(
            datum,
            law,
            ctx,
            b,
            grid.a_range.node(k / n_eps),
            grid.eps_range.node(k % n_eps),
        )
    };
    let cells: Vec<Cell> = if parallel {
        (0..grid.cells()).into_par_iter().map(cell).collect()
    } else {
        (0..grid.cells()).map(cell).collect()
    };
    Ok(FeasibilityTable {
        b,
        grid: *grid,
        cells,
    })
}

pub const CSV_HEADER: [&str; 13] = [
    "a",
    "eps",
    "feasible",
    "min_slack",
    "slack_epsilon",
    "slack_a1",
    "slack_a2",
    "slack_a3",
    "slack_en",
    "slack_tr1",
    "slack_det1",
    "slack_tr2",
    "slack_det2",
];

pub fn emit_csv(table: &FeasibilityTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if table.cells.is_empty() {
        return Err(Error::Grid("cannot write an empty table".into()));
    }
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for c in &table.cells {
        let mut row = vec![
            c.a.to_string(),
            c.eps.to_string(),
            (c.feasible as u8).to_string(),
            c.min_slack.to_string(),
        ];
        row.extend(c.slacks.iter().map(|s| s.to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn cell_colour(c: &Cell) -> String {
    if c.min_slack.is_nan() {
        return "#bdbdbd".into();
    }
    // Magnitude on a log scale from 1e-8 to 1.
    let t = ((c.min_slack.abs().max(1e-300).log10() + 8.0) / 8.0).clamp(0.0, 1.0);
    let (r, g, b) = if c.feasible {
        (230.0 - 200.0 * t, 245.0 - 110.0 * t, 230.0 - 200.0 * t)
    } else {
        (250.0 - 60.0 * t, 225.0 - 200.0 * t, 225.0 - 200.0 * t)
    };
    format!("#{:02x}{:02x}{:02x}", r as u8, g as u8, b as u8)
}

/// Self-contained SVG heatmap: `a` on the horizontal axis, `ε` upwards;
/// green cells are feasible, red infeasible, darker means larger |min_slack|.
pub fn emit_heatmap(table: &FeasibilityTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if table.cells.is_empty() {
        return Err(Error::Grid("cannot plot an empty table".into()));
    }
    let (na, ne) = (table.grid.a_range.count, table.grid.eps_range.count);
    let (left, top, size) = (80.0, 40.0, 600.0);
    let (cw, ch) = (size / na as f64, size / ne as f64);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = left + size + 40.0,
        h = top + size + 70.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">feasibility in (a, eps), b = {:.6}: green feasible, red infeasible</text>"#,
        left + size / 2.0,
        table.b
    );
    for (k, c) in table.cells.iter().enumerate() {
        let (i, j) = (k / ne, k % ne);
        let x = left + i as f64 * cw;
        let y = top + size - (j + 1) as f64 * ch;
        let _ = writeln!(
            svg,
            r#"<rect x="{x:.3}" y="{y:.3}" width="{cw:.3}" height="{ch:.3}" fill="{}"/>"#,
            cell_colour(c)
        );
    }
    let _ = writeln!(
        svg,
        r#"<rect x="{left}" y="{top}" width="{size}" height="{size}" fill="none" stroke="black"/>"#
    );
    let ar = table.grid.a_range;
    let er = table.grid.eps_range;
    let base = top + size;
    for (v, x) in [(ar.low, left), (ar.high, left + size)] {
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{}" text-anchor="middle">{v:.4e}</text>"#,
            base + 18.0
        );
    }
    for (v, y) in [(er.low, base), (er.high, top)] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{y}" text-anchor="end">{v:.4e}</text>"#,
            left - 6.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">a</text>"#,
        left + size / 2.0,
        base + 45.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {})">eps</text>"#,
        top + size / 2.0,
        top + size / 2.0
    );
    svg.push_str("</svg>\n");
    fs::write(path, svg).map_err(|e| Error::io(path, e))
}
