//! Invariant harness: sum rules, detailed balance, generator and steady-state
//! quality, first law and Carnot bounds for a configured machine (and every
//! point of its sweep, when one is configured).

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::Result;
use crate::floquet::{self, MachineParams};
use crate::kms;
use crate::polaron;
use crate::spectrum::{format_float, LineSpectrum};
use crate::thermo::{self, Regime, Solution};

pub const SUM_RULE_TOL: f64 = 1e-9;
pub const KMS_TOL: f64 = 1e-9;
pub const TRACE_PRESERVATION_TOL: f64 = 1e-12;
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-12;
pub const COMPLETENESS_TOL: f64 = 1e-12;
pub const FIRST_LAW_TOL: f64 = 1e-12;
pub const BOUND_TOL: f64 = 1e-9;
pub const SINGLE_TEMPERATURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CheckReport {
    pub rows: Vec<CheckRow>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// `measured ≤ tolerance` passes; NaN fails.
    fn upper(&mut self, name: &str, measured: f64, tolerance: f64) {
        self.rows.push(CheckRow {
            name: name.to_string(),
            measured,
            tolerance,
            pass: measured <= tolerance,
        });
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut out = out;
        writeln!(out, "# polaron-qhm v1")?;
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(["invariant", "measured", "tolerance", "status"])?;
        for r in &self.rows {
            w.write_record([
                r.name.clone(),
                format_float(r.measured),
                format_float(r.tolerance),
                if r.pass { "pass" } else { "FAIL" }.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Worst-case values over every solved point.
#[derive(Debug, Default)]
struct PointStats {
    residual: f64,
    trace: f64,
    negativity: f64,
    hermiticity: f64,
    first_law: f64,
    recomputed: f64,
    carnot: f64,
    cop: f64,
    single_temperature: f64,
    failed: usize,
}

impl PointStats {
    fn absorb(&mut self, o: PointStats) {
        self.residual = self.residual.max(o.residual);
        self.trace = self.trace.max(o.trace);
        self.negativity = self.negativity.max(o.negativity);
        self.hermiticity = self.hermiticity.max(o.hermiticity);
        self.first_law = self.first_law.max(o.first_law);
        self.recomputed = self.recomputed.max(o.recomputed);
        self.carnot = self.carnot.max(o.carnot);
        self.cop = self.cop.max(o.cop);
        self.single_temperature = self.single_temperature.max(o.single_temperature);
        self.failed += o.failed;
    }
}

fn point_stats(sol: &Solution) -> PointStats {
    let s = &sol.steady;
    let c = &sol.currents;
    let r = &sol.report;
    let scale = c.flux_scale.max(f64::MIN_POSITIVE);
    let (j1, j2) = thermo::currents_from_jumps(&sol.liouvillian, &s.rho, sol.params.omega_l);
    let equal_t = (sol.params.cold.beta() - sol.params.hot.beta()).abs() < kms::DEGENERATE_BETA_TOL;
    PointStats {
        residual: s.residual,
        trace: s.trace_error,
        negativity: (-s.min_eigenvalue).max(0.0),
        hermiticity: s.hermiticity_error,
        first_law: (c.power + c.j1 + c.j2).abs() / scale,
        recomputed: ((j1 - c.j1).abs() + (j2 - c.j2).abs()) / scale,
        carnot: match (r.regime, r.eta) {
            (Regime::Engine, Some(eta)) => (eta - r.eta_carnot).max(0.0),
            _ => 0.0,
        },
        cop: match (r.regime, r.cop) {
            (Regime::Refrigerator, Some(cop)) => (cop - r.cop_carnot).max(0.0),
            _ => 0.0,
        },
        single_temperature: if equal_t { (-c.power).max(0.0) } else { 0.0 },
        failed: 0,
    }
}

fn solve_stats(params: &MachineParams, cfg: &RunConfig) -> PointStats {
    match thermo::solve(params, &cfg.numerics) {
        Ok(sol) => point_stats(&sol),
        Err(_) => PointStats {
            failed: 1,
            ..PointStats::default()
        },
    }
}

/// Runs every invariant on the configured machine.
pub fn run_check(cfg: &RunConfig) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let p = &cfg.machine;
    let n = &cfg.numerics;

    let a = polaron::franck_condon_a(&p.cold);
    let cold_w = polaron::cold_harmonic_weights(&p.cold, true, n)?;
    report.upper("cold_harmonic_total", (cold_w.total() - 1.0).abs(), SUM_RULE_TOL);

    let g1 = polaron::spectrum_g1(&p.cold, p.rabi, n)?;
    let expected = 2.0 * PI * 0.25 * p.rabi * p.rabi * (1.0 - a * a);
    let g1_sum = if expected > 0.0 {
        (g1.total_weight() - expected).abs() / expected
    } else {
        g1.total_weight()
    };
    report.upper("g1_sum_rule", g1_sum, SUM_RULE_TOL);

    let g1_for_kms = match &cfg.check.g1_spectrum {
        Some(path) => LineSpectrum::read_csv(std::fs::File::open(path)?, n.broadening_eta, n.merge_tol)?,
        None => g1,
    };
    let k1 = kms::check_kms_g1(&g1_for_kms, p.cold.beta(), n.merge_tol);
    report.upper("kms_g1", k1.max_violation, KMS_TOL);

    let (g2, d) = polaron::spectrum_g2(&p.cold, &p.hot, n)?;
    let k2 = kms::generalized_kms_check(&g2, &d, p.cold.beta(), p.hot.beta(), n.merge_tol);
    report.upper("kms_g2_lines", k2.lines.max_violation, KMS_TOL);
    report.upper("kms_g2_terms", k2.terms.max_violation, KMS_TOL);

    let basis = floquet::dressed_basis(p);
    let comps = floquet::fourier_decompose(&basis);
    report.upper("fourier_completeness", floquet::completeness_error(&comps), COMPLETENESS_TOL);
    let l = floquet::assemble(p, &g1_for_kms, &g2, n);
    report.upper("trace_preservation", l.trace_preservation_error() / l.norm().max(f64::MIN_POSITIVE), TRACE_PRESERVATION_TOL);

    let mut stats = solve_stats(p, cfg);
    if let Some(spec) = &cfg.sweep {
        let all: Vec<PointStats> = spec
            .grid()
            .par_iter()
            .map(|&v| match spec.parameter.apply(p, v) {
                Ok(q) => solve_stats(&q, cfg),
                Err(_) => PointStats {
                    failed: 1,
                    ..PointStats::default()
                },
            })
            .collect();
        for s in all {
            stats.absorb(s);
        }
    }
    report.upper("steady_residual", stats.residual, RESIDUAL_TOL);
    report.upper("steady_trace", stats.trace, TRACE_TOL);
    report.upper("steady_positivity", stats.negativity, POSITIVITY_TOL);
    report.upper("steady_hermiticity", stats.hermiticity, POSITIVITY_TOL);
    report.upper("first_law", stats.first_law, FIRST_LAW_TOL);
    report.upper("currents_recomputed", stats.recomputed, FIRST_LAW_TOL);
    report.upper("carnot_engine", stats.carnot, BOUND_TOL);
    report.upper("carnot_refrigerator", stats.cop, BOUND_TOL);
    report.upper("single_temperature_power", stats.single_temperature, SINGLE_TEMPERATURE_TOL);
    report.rows.push(CheckRow {
        name: "failed_points".into(),
        measured: stats.failed as f64,
        tolerance: 0.0,
        pass: true,
    });
    Ok(report)
}
