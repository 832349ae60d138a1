//! Heat currents, power and figures of merit at the steady state.
//!
//! Currents count energy flowing into the working fluid: `J_i > 0` means
//! channel `i` heats the two-level system, and `P = −J₁ − J₂ < 0` means work
//! is extracted by the drive. Each Lindblad term moves dressed population at
//! rate `Tr[Π₊ L_c ρ̄]` and carries the quantum `ω + qω_l`; terms with zero
//! quasi-frequency do not move population and so carry no heat.

use std::fmt;

use crate::bath::BathSpec;
use crate::error::{Error, Result};
use crate::floquet::{self, Channel, Liouvillian, MachineParams, Op, Quasi, SteadyState};
use crate::kms::{self, SpectralDecomposition};
use crate::numerics::Numerics;
use crate::polaron;
use crate::spectrum::LineSpectrum;

/// Relative size of `P` (against the summed magnitudes of all current
/// contributions) below which the machine counts as idle.
pub const REGIME_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Currents {
    pub j1: f64,
    pub j2: f64,
    pub power: f64,
    /// `Σ |contribution|` over all terms; the natural scale for `P ≈ 0`.
    pub flux_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Engine,
    Refrigerator,
    Dissipator,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Engine => "engine",
            Regime::Refrigerator => "refrigerator",
            Regime::Dissipator => "dissipator",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermoReport {
    pub j1: f64,
    pub j2: f64,
    pub power: f64,
    /// Heat drawn from the cold bath, `J₁ + λ(ω₀)J₂`; NaN when `λ(ω₀)` is
    /// undefined.
    pub j_c: f64,
    /// `β(ω₀)`.
    pub beta_eff: f64,
    /// `λ(ω₀)`.
    pub lambda: f64,
    /// Engine efficiency `−P/((1 − λ)J₂)`; engine regime only.
    pub eta: Option<f64>,
    /// `−P/J₂`; engine regime only.
    pub eta_naive: Option<f64>,
    pub eta_carnot: f64,
    /// `J_C/P`; refrigerator regime only.
    pub cop: Option<f64>,
    pub cop_carnot: f64,
    pub regime: Regime,
}

/// `J_i = Σ sgn(ω)(ω + qω_l) Tr[Π₊ L_c ρ̄]` per channel, `P = −J₁ − J₂`.
pub fn currents_and_power(l: &Liouvillian, rho: &Op, omega_l: f64) -> Currents {
    let v = floquet::vectorize(rho);
    let (mut j1, mut j2, mut scale) = (0.0, 0.0, 0.0);
    for t in &l.terms {
        let drho = floquet::unvectorize(&(t.superop * v));
        let flux = (l.projector_plus * drho).trace().re;
        let nu = t.component.omega + t.component.q as f64 * omega_l;
        let contribution = t.component.quasi.sgn() * nu * flux;
        scale += contribution.abs();
        match t.component.channel {
            Channel::One => j1 += contribution,
            Channel::Two => j2 += contribution,
        }
    }
    Currents {
        j1,
        j2,
        power: -j1 - j2,
        flux_scale: scale,
    }
}

/// Weak-driving closed forms: with `B = G₁G₂/(G₁+G₂)(e^{−β_Cδ} − e^{−β(ω₀)ω₀})`,
/// `J₁ = δB`, `J₂ = −ω₀B`, `P = ω_l B`.
pub fn analytic_weak_driving(params: &MachineParams, g1_delta: f64, g2_omega0: f64, beta_eff: f64) -> Result<Currents> {
    let denom = g1_delta + g2_omega0;
    if denom == 0.0 {
        return Err(Error::ZeroRates);
    }
    let delta = params.delta();
    let beta_c = params.cold.beta();
    let bracket = boltzmann(beta_c, delta) - boltzmann(beta_eff, params.omega0);
    let b = g1_delta * g2_omega0 / denom * bracket;
    Ok(Currents {
        j1: delta * b,
        j2: -params.omega0 * b,
        power: params.omega_l * b,
        flux_scale: (delta.abs() + params.omega0 + params.omega_l) * b.abs(),
    })
}

fn boltzmann(beta: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        1.0
    } else {
        (-beta * omega).exp()
    }
}

/// `ω_l/ω₀ < 1 − β(ω₀)/β_C`; the boundary itself does not extract work.
pub fn extraction_condition(omega_l: f64, omega0: f64, beta_eff: f64, beta_c: f64) -> bool {
    omega_l / omega0 < 1.0 - beta_eff / beta_c
}

/// `(η, η_naive)` with `η_naive = −P/J₂` and `η = η_naive/(1 − λ₀)`.
pub fn efficiency(power: f64, j2: f64, lambda0: f64) -> Result<(f64, f64)> {
    if !(power < 0.0) || !(j2 > 0.0) {
        return Err(Error::Regime(format!(
            "efficiency needs P < 0 and J2 > 0, got P = {power}, J2 = {j2}"
        )));
    }
    if lambda0 >= 1.0 {
        return Err(Error::UnphysicalFraction(lambda0));
    }
    let naive = -power / j2;
    Ok((naive / (1.0 - lambda0), naive))
}

/// Heat drawn from the cold bath: all of `J₁` plus the cold share `λ₀J₂`.
pub fn cooling_power(j1: f64, j2: f64, lambda0: f64) -> f64 {
    j1 + lambda0 * j2
}

pub fn carnot_efficiency(beta_c: f64, beta_h: f64) -> f64 {
    1.0 - beta_h / beta_c
}

/// `β_H/(β_C − β_H)`; infinite at equal temperatures.
pub fn carnot_cop(beta_c: f64, beta_h: f64) -> f64 {
    if beta_c.is_infinite() {
        0.0
    } else {
        beta_h / (beta_c - beta_h)
    }
}

/// Ultra-strong-coupling envelope `e^{−4ξ²S}/ξ²`, `S = Σ|g/ω|²coth(β_Cω/2)`,
/// up to an overall constant.
pub fn asymptotic_power_envelope(xi_grid: &[f64], cold: &BathSpec) -> Vec<f64> {
    let s = cold.reorganization_sum();
    xi_grid.iter().map(|&xi| (-4.0 * xi * xi * s).exp() / (xi * xi)).collect()
}

/// Fitted constant (geometric mean of `|P|/E`) and the spread `max/min − 1`
/// of the ratio.
pub fn envelope_fit(power: &[f64], envelope: &[f64]) -> (f64, f64) {
    let ratios: Vec<f64> = power.iter().zip(envelope).map(|(p, e)| p.abs() / e).collect();
    let mean_log = ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64;
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    (mean_log.exp(), max / min - 1.0)
}

/// `β(ω₀)` and `λ(ω₀)` from the `G̃₂` lines within `eta` of `omega0`,
/// weight-averaging `β` when several qualify.
pub fn local_temperature_at(
    d: &SpectralDecomposition,
    omega0: f64,
    beta_c: f64,
    beta_h: f64,
    eta: f64,
) -> Result<(f64, f64)> {
    let floor = crate::numerics::DEFAULT_WEIGHT_FLOOR * d.total_weight();
    let near: Vec<_> = d
        .lines()
        .iter()
        .filter(|l| (l.frequency - omega0).abs() <= eta && l.frequency > 0.0 && l.weight > floor)
        .collect();
    if near.is_empty() {
        return Err(Error::MissingFrequency(omega0));
    }
    let total: f64 = near.iter().map(|l| l.weight).sum();
    let beta = near
        .iter()
        .map(|l| l.weight * kms::line_beta(l, beta_c, beta_h))
        .sum::<f64>()
        / total;
    if (beta_c - beta_h).abs() < kms::DEGENERATE_BETA_TOL {
        return Err(Error::DegenerateTemperatures { beta_eff: beta });
    }
    Ok((beta, kms::mixing_fraction(beta, beta_c, beta_h)))
}

/// Figures of merit from currents and the local temperature at `ω₀`.
pub fn report(currents: &Currents, beta_eff: f64, lambda: f64, beta_c: f64, beta_h: f64) -> ThermoReport {
    let Currents { j1, j2, power, flux_scale } = *currents;
    let tol = REGIME_REL_TOL * flux_scale;
    // without a local temperature at ω₀ the cold share of J₂ is unknown
    let j_c = if lambda.is_finite() { cooling_power(j1, j2, lambda) } else { f64::NAN };
    let regime = if power < -tol {
        Regime::Engine
    } else if power > tol && j_c > 0.0 {
        Regime::Refrigerator
    } else {
        Regime::Dissipator
    };
    let (eta, eta_naive) = match regime {
        Regime::Engine if lambda.is_finite() => match efficiency(power, j2, lambda) {
            Ok((e, n)) => (Some(e), Some(n)),
            Err(_) => (None, None),
        },
        _ => (None, None),
    };
    ThermoReport {
        j1,
        j2,
        power,
        j_c,
        beta_eff,
        lambda,
        eta,
        eta_naive,
        eta_carnot: carnot_efficiency(beta_c, beta_h),
        cop: (regime == Regime::Refrigerator).then(|| j_c / power),
        cop_carnot: carnot_cop(beta_c, beta_h),
        regime,
    }
}

/// Everything computed for one machine configuration.
#[derive(Debug, Clone)]
pub struct Solution {
    pub params: MachineParams,
    pub franck_condon: f64,
    pub omega_r: f64,
    pub g1: LineSpectrum,
    pub g2: LineSpectrum,
    pub decomposition: SpectralDecomposition,
    pub liouvillian: Liouvillian,
    pub steady: SteadyState,
    pub currents: Currents,
    pub report: ThermoReport,
    /// Set when no `G̃₂` line lies within the broadening of `ω₀`.
    pub missing_local_temperature: bool,
}

impl Solution {
    pub fn g1_at_delta(&self) -> f64 {
        self.g1.evaluate(self.params.delta())
    }

    pub fn g2_at_omega0(&self) -> f64 {
        self.g2.evaluate(self.params.omega0)
    }
}

/// Spectra, local temperature, generator, steady state and thermodynamics.
pub fn solve(params: &MachineParams, numerics: &Numerics) -> Result<Solution> {
    let g1 = polaron::spectrum_g1(&params.cold, params.rabi, numerics)?;
    let (g2, decomposition) = polaron::spectrum_g2(&params.cold, &params.hot, numerics)?;
    solve_with_spectra(params, numerics, g1, g2, decomposition)
}

/// As [`solve`] but with the coupling spectra supplied by the caller.
pub fn solve_with_spectra(
    params: &MachineParams,
    numerics: &Numerics,
    g1: LineSpectrum,
    g2: LineSpectrum,
    decomposition: SpectralDecomposition,
) -> Result<Solution> {
    let liouvillian = floquet::assemble(params, &g1, &g2, numerics);
    if liouvillian.all_rates_zero {
        return Err(Error::ZeroRates);
    }
    let steady = floquet::steady_state(&liouvillian, numerics.rank_tol)?;
    let currents = currents_and_power(&liouvillian, &steady.rho, params.omega_l);
    let (beta_c, beta_h) = (params.cold.beta(), params.hot.beta());
    let (beta_eff, lambda, missing) =
        match local_temperature_at(&decomposition, params.omega0, beta_c, beta_h, numerics.broadening_eta) {
            Ok((b, l)) => (b, l, false),
            Err(Error::DegenerateTemperatures { beta_eff }) => (beta_eff, f64::NAN, false),
            Err(Error::MissingFrequency(_)) => (f64::NAN, f64::NAN, true),
            Err(e) => return Err(e),
        };
    let report = report(&currents, beta_eff, lambda, beta_c, beta_h);
    let pol = params.polaron();
    Ok(Solution {
        params: params.clone(),
        franck_condon: pol.a,
        omega_r: pol.omega_r,
        g1,
        g2,
        decomposition,
        liouvillian,
        steady,
        currents,
        report,
        missing_local_temperature: missing,
    })
}

/// Heat currents recomputed as `−Σ (ω + qω_l) Γ Tr[S†Sρ̄]` over the terms with
/// nonzero quasi-frequency: the energy a jump hands to its bath.
pub fn currents_from_jumps(l: &Liouvillian, rho: &Op, omega_l: f64) -> (f64, f64) {
    let (mut j1, mut j2) = (0.0, 0.0);
    for t in l.terms.iter().filter(|t| t.component.quasi != Quasi::Zero) {
        let s = &t.component.op;
        let occupation = (s.adjoint() * s * rho).trace().re;
        let nu = t.component.omega + t.component.q as f64 * omega_l;
        let c = -nu * t.rate * occupation;
        match t.component.channel {
            Channel::One => j1 += c,
            Channel::Two => j2 += c,
        }
    }
    (j1, j2)
}
