//! Parameter sweeps: one full pipeline solve per grid value, evaluated in
//! parallel and emitted in grid order as CSV, optionally with an SVG plot.

use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;

use crate::config::{RunConfig, Scale, SweepParameter};
use crate::error::{Error, Result};
use crate::floquet::MachineParams;
use crate::spectrum::format_float;
use crate::thermo::{self, Regime};

/// Every column a sweep CSV can carry, in default order.
pub const COLUMNS: &[&str] = &[
    "value",
    "A",
    "Omega_r",
    "G1_delta",
    "G2_omega0",
    "beta_omega0",
    "lambda_omega0",
    "J1",
    "J2",
    "P",
    "J_C",
    "eta",
    "eta_naive",
    "eta_carnot",
    "COP",
    "regime",
    "residual",
    "flags",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub a: f64,
    pub omega_r: f64,
    pub g1_delta: f64,
    pub g2_omega0: f64,
    pub beta_eff: f64,
    pub lambda: f64,
    pub j1: f64,
    pub j2: f64,
    pub power: f64,
    pub j_c: f64,
    pub eta: f64,
    pub eta_naive: f64,
    pub eta_carnot: f64,
    pub cop: f64,
    /// `None` when the point failed.
    pub regime: Option<Regime>,
    pub residual: f64,
    pub flags: Vec<String>,
}

impl SweepRow {
    pub fn failed(&self) -> bool {
        self.regime.is_none()
    }

    fn failure(value: f64, params: Option<&MachineParams>, flag: String) -> Self {
        let (a, omega_r) = params.map_or((f64::NAN, f64::NAN), |p| {
            let pol = p.polaron();
            (pol.a, pol.omega_r)
        });
        Self {
            value,
            a,
            omega_r,
            g1_delta: f64::NAN,
            g2_omega0: f64::NAN,
            beta_eff: f64::NAN,
            lambda: f64::NAN,
            j1: f64::NAN,
            j2: f64::NAN,
            power: f64::NAN,
            j_c: f64::NAN,
            eta: f64::NAN,
            eta_naive: f64::NAN,
            eta_carnot: f64::NAN,
            cop: f64::NAN,
            regime: None,
            residual: f64::NAN,
            flags: vec![flag],
        }
    }

    /// Cell text for a named column.
    pub fn cell(&self, column: &str) -> String {
        match column {
            "regime" => self.regime.map_or_else(|| "failed".to_string(), |r| r.to_string()),
            "flags" => self.flags.join("|"),
            other => format_float(self.number(other).unwrap_or(f64::NAN)),
        }
    }

    /// Numeric value of a column, `None` for the text columns.
    pub fn number(&self, column: &str) -> Option<f64> {
        Some(match column {
            "value" => self.value,
            "A" => self.a,
            "Omega_r" => self.omega_r,
            "G1_delta" => self.g1_delta,
            "G2_omega0" => self.g2_omega0,
            "beta_omega0" => self.beta_eff,
            "lambda_omega0" => self.lambda,
            "J1" => self.j1,
            "J2" => self.j2,
            "P" => self.power,
            "J_C" => self.j_c,
            "eta" => self.eta,
            "eta_naive" => self.eta_naive,
            "eta_carnot" => self.eta_carnot,
            "COP" => self.cop,
            "residual" => self.residual,
            _ => return None,
        })
    }
}

/// Short tag for a failure, used in the `flags` column.
pub fn error_flag(e: &Error) -> String {
    match e {
        Error::NonConvergence { .. } => "bessel-truncation".into(),
        Error::ZeroRates | Error::NoSteadyState => "all-rates-zero".into(),
        Error::NonUniqueKernel(_) => "kernel-degenerate".into(),
        Error::SingularSystem => "singular-system".into(),
        other => format!("failed: {other}"),
    }
}

/// Solves the machine at one parameter set.
pub fn run_machine(value: f64, params: &MachineParams, cfg: &RunConfig) -> SweepRow {
    let sol = match thermo::solve(params, &cfg.numerics) {
        Ok(s) => s,
        Err(e) => return SweepRow::failure(value, Some(params), error_flag(&e)),
    };
    let r = &sol.report;
    let mut flags = Vec::new();
    if sol.missing_local_temperature {
        flags.push("no-local-temperature".to_string());
    }
    if (params.cold.beta() - params.hot.beta()).abs() < crate::kms::DEGENERATE_BETA_TOL {
        flags.push("degenerate-temperatures".to_string());
    }
    SweepRow {
        value,
        a: sol.franck_condon,
        omega_r: sol.omega_r,
        g1_delta: sol.g1_at_delta(),
        g2_omega0: sol.g2_at_omega0(),
        beta_eff: r.beta_eff,
        lambda: r.lambda,
        j1: r.j1,
        j2: r.j2,
        power: r.power,
        j_c: r.j_c,
        eta: r.eta.unwrap_or(f64::NAN),
        eta_naive: r.eta_naive.unwrap_or(f64::NAN),
        eta_carnot: r.eta_carnot,
        cop: r.cop.unwrap_or(f64::NAN),
        regime: Some(r.regime),
        residual: sol.steady.residual,
        flags,
    }
}

/// One grid point: applies the swept value to the base machine and solves.
pub fn run_point(cfg: &RunConfig, parameter: SweepParameter, value: f64) -> SweepRow {
    match parameter.apply(&cfg.machine, value) {
        Ok(p) => run_machine(value, &p, cfg),
        Err(e) => SweepRow::failure(value, None, error_flag(&e)),
    }
}

/// All grid points of the configured sweep, in grid order.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::config("sweep", "no [sweep] section"))?;
    let grid = spec.grid();
    Ok(grid
        .par_iter()
        .map(|&v| run_point(cfg, spec.parameter, v))
        .collect())
}

/// CSV with the versioned comment line, a header row and one row per point.
pub fn write_csv<W: Write>(rows: &[SweepRow], columns: &[String], out: W) -> Result<()> {
    let mut out = out;
    writeln!(out, "# polaron-qhm v1")?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(columns)?;
    for r in rows {
        w.write_record(columns.iter().map(|c| r.cell(c)))?;
    }
    w.flush()?;
    Ok(())
}

/// Single-series line plot of `column` against the swept value.
pub fn render_svg(rows: &[SweepRow], column: &str, x_label: &str, log_x: bool, log_y: bool) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const L: f64 = 80.0;
    const R: f64 = 20.0;
    const T: f64 = 20.0;
    const B: f64 = 50.0;
    let tx = |v: f64| if log_x { v.log10() } else { v };
    let ty = |v: f64| if log_y { v.abs().log10() } else { v };
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| {
            let y = r.number(column)?;
            let ok = y.is_finite() && r.value.is_finite() && (!log_y || y != 0.0) && (!log_x || r.value > 0.0);
            ok.then(|| (tx(r.value), ty(y)))
        })
        .collect();
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let (x0, x1) = range(pts.iter().map(|p| p.0));
    let (y0, y1) = range(pts.iter().map(|p| p.1));
    let px = |x: f64| L + (x - x0) / (x1 - x0) * (W - L - R);
    let py = |y: f64| H - B - (y - y0) / (y1 - y0) * (H - T - B);
    let _ = writeln!(
        svg,
        r#"<path d="M{L} {T} V{} H{}" fill="none" stroke="black"/>"#,
        H - B,
        W - R
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (sx, sy) = (px(xv), py(yv));
        let _ = writeln!(svg, r#"<line x1="{sx:.2}" y1="{}" x2="{sx:.2}" y2="{}" stroke="black"/>"#, H - B, H - B + 5.0);
        let _ = writeln!(
            svg,
            r#"<text x="{sx:.2}" y="{}" text-anchor="middle">{}</text>"#,
            H - B + 20.0,
            tick_label(xv, log_x)
        );
        let _ = writeln!(svg, r#"<line x1="{}" y1="{sy:.2}" x2="{L}" y2="{sy:.2}" stroke="black"/>"#, L - 5.0);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            L - 8.0,
            sy + 4.0,
            tick_label(yv, log_y)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        L + 0.5 * (W - L - R),
        H - 10.0,
        escape(x_label)
    );
    let y_label = if log_y { format!("|{column}|") } else { column.to_string() };
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
        T + 0.5 * (H - T - B),
        T + 0.5 * (H - T - B),
        escape(&y_label)
    );
    let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
        path.join(" ")
    );
    svg.push_str("</svg>\n");
    svg
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        format!("1e{v:.1}")
    } else {
        format!("{v:.3e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Runs the configured sweep and writes the CSV (to `csv_path` or `stdout`)
/// and the SVG when requested. Returns the rows.
pub fn run_and_write(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<Vec<SweepRow>> {
    let rows = run_sweep(cfg)?;
    match &cfg.output.csv_path {
        Some(path) => {
            let f = std::fs::File::create(path)?;
            write_csv(&rows, &cfg.output.columns, std::io::BufWriter::new(f))?;
        }
        None => write_csv(&rows, &cfg.output.columns, &mut *stdout)?,
    }
    if let (Some(path), Some(spec)) = (&cfg.output.svg_path, &cfg.sweep) {
        let svg = render_svg(
            &rows,
            &cfg.output.svg_column,
            spec.parameter.name(),
            spec.scale == Scale::Log,
            cfg.output.svg_log_y,
        );
        std::fs::write(path, svg)?;
    }
    Ok(rows)
}
