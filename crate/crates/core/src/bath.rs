//! Discrete bosonic baths and their weak-coupling (original-basis) correlation
//! functions and spectra.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectrum::{LineSpectrum, SpectralLine};

pub const MAX_MODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BathLabel {
    Cold,
    Hot,
}

impl std::fmt::Display for BathLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BathLabel::Cold => f.write_str("cold"),
            BathLabel::Hot => f.write_str("hot"),
        }
    }
}

/// One bath oscillator: frequency `ω_k > 0` and complex coupling `g_k`.
/// Only `|g_k|` enters any observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathMode {
    frequency: f64,
    coupling: Complex64,
}

impl BathMode {
    pub fn new(frequency: f64, coupling: Complex64) -> Result<Self> {
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::InvalidBath(format!(
                "mode frequency must be positive and finite, got {frequency}"
            )));
        }
        let g = coupling.norm();
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidBath(format!(
                "mode coupling must be nonzero and finite, got {coupling}"
            )));
        }
        Ok(Self {
            frequency,
            coupling,
        })
    }

    pub fn real(frequency: f64, coupling: f64) -> Result<Self> {
        Self::new(frequency, Complex64::new(coupling, 0.0))
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn coupling(&self) -> Complex64 {
        self.coupling
    }

    /// `|g_k|²`
    pub fn coupling_sq(&self) -> f64 {
        self.coupling.norm_sqr()
    }
}

/// A thermal bath: 1–8 modes, strength `ξ ≥ 0`, inverse temperature `β > 0`
/// (`f64::INFINITY` for zero temperature).
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    label: BathLabel,
    modes: Vec<BathMode>,
    xi: f64,
    beta: f64,
}

impl BathSpec {
    pub fn new(label: BathLabel, modes: Vec<BathMode>, xi: f64, beta: f64) -> Result<Self> {
        if modes.is_empty() || modes.len() > MAX_MODES {
            return Err(Error::InvalidBath(format!(
                "{label} bath needs 1..={MAX_MODES} modes, got {}",
                modes.len()
            )));
        }
        for (i, a) in modes.iter().enumerate() {
            for b in &modes[i + 1..] {
                let scale = a.frequency.max(b.frequency);
                if (a.frequency - b.frequency).abs() <= 1e-12 * scale {
                    return Err(Error::InvalidBath(format!(
                        "{label} bath has duplicate mode frequency {}",
                        a.frequency
                    )));
                }
            }
        }
        validate_xi(xi)?;
        validate_beta(beta)?;
        Ok(Self {
            label,
            modes,
            xi,
            beta,
        })
    }

    /// Single-mode bath with a real coupling.
    pub fn single(label: BathLabel, frequency: f64, coupling: f64, xi: f64, beta: f64) -> Result<Self> {
        Self::new(label, vec![BathMode::real(frequency, coupling)?], xi, beta)
    }

    pub fn label(&self) -> BathLabel {
        self.label
    }

    pub fn modes(&self) -> &[BathMode] {
        &self.modes
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn with_xi(mut self, xi: f64) -> Result<Self> {
        validate_xi(xi)?;
        self.xi = xi;
        Ok(self)
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        validate_beta(beta)?;
        self.beta = beta;
        Ok(self)
    }

    /// `Σ_k |g_k/ω_k|² coth(βω_k/2)`, the sum appearing in the Franck–Condon
    /// exponent and the ultra-strong-coupling envelope (without `ξ²`).
    pub fn reorganization_sum(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| m.coupling_sq() / (m.frequency * m.frequency) * coth_unchecked(self.beta, m.frequency))
            .sum()
    }
}

fn validate_xi(xi: f64) -> Result<()> {
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::InvalidBath(format!("strength xi must be >= 0, got {xi}")));
    }
    Ok(())
}

fn validate_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || beta.is_nan() {
        return Err(Error::InvalidBath(format!(
            "inverse temperature must be > 0 (or inf), got {beta}"
        )));
    }
    Ok(())
}

/// `coth(βω/2)`, exactly 1 at `β = ∞`.
pub fn thermal_coth(beta: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("thermal_coth needs omega > 0, got {omega}")));
    }
    if !(beta > 0.0) || beta.is_nan() {
        return Err(Error::Domain(format!("thermal_coth needs beta > 0, got {beta}")));
    }
    Ok(coth_unchecked(beta, omega))
}

pub(crate) fn coth_unchecked(beta: f64, omega: f64) -> f64 {
    if beta.is_infinite() {
        1.0
    } else {
        1.0 / (0.5 * beta * omega).tanh()
    }
}

/// Bose occupation `1/(e^{βω} − 1)`, zero at `β = ∞`.
pub fn bose_occupation(beta: f64, omega: f64) -> f64 {
    if beta.is_infinite() {
        0.0
    } else {
        1.0 / (beta * omega).exp_m1()
    }
}

/// `ξ² Σ_k |g_k|² (cos(ω_k t) coth(βω_k/2) − i sin(ω_k t))`.
pub fn weak_correlation(bath: &BathSpec, t: f64) -> Complex64 {
    let xi2 = bath.xi * bath.xi;
    bath.modes
        .iter()
        .map(|m| {
            let (s, c) = (m.frequency * t).sin_cos();
            Complex64::new(c * coth_unchecked(bath.beta, m.frequency), -s) * m.coupling_sq()
        })
        .sum::<Complex64>()
        * xi2
}

/// [`weak_correlation`] at complex time.
pub fn weak_correlation_at(bath: &BathSpec, z: Complex64) -> Complex64 {
    let xi2 = bath.xi * bath.xi;
    bath.modes
        .iter()
        .map(|m| {
            let wz = z * m.frequency;
            (wz.cos() * coth_unchecked(bath.beta, m.frequency) - Complex64::i() * wz.sin()) * m.coupling_sq()
        })
        .sum::<Complex64>()
        * xi2
}

/// Original-basis spectrum `∫ e^{iωt} C(t) dt`: emission lines at `+ω_k`
/// with weight `2πξ²|g_k|²(n̄_k + 1)` and absorption lines at `−ω_k` with
/// weight `2πξ²|g_k|² n̄_k`.
pub fn weak_spectrum(bath: &BathSpec, eta: f64, merge_tol: f64) -> Result<LineSpectrum> {
    let xi2 = bath.xi * bath.xi;
    let mut lines = Vec::with_capacity(2 * bath.modes.len());
    for m in &bath.modes {
        let n = bose_occupation(bath.beta, m.frequency);
        let w = 2.0 * PI * xi2 * m.coupling_sq();
        lines.push(SpectralLine::new(m.frequency, w * (n + 1.0)));
        lines.push(SpectralLine::new(-m.frequency, w * n));
    }
    LineSpectrum::new(lines, eta, merge_tol)
}

/// Outcome of the `γ τ_cor` weak-coupling estimate. Informational only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingDiagnostic {
    /// `γ τ_cor`; `+∞` when the correlation never decays.
    pub value: f64,
    /// Broadened spectrum at `ω₀`.
    pub gamma: f64,
    /// 1/e decay time of the correlation envelope.
    pub tau_cor: f64,
    pub non_decaying: bool,
}

/// Samples per shortest mode period when scanning the correlation envelope.
const DIAGNOSTIC_SAMPLES_PER_PERIOD: f64 = 32.0;

/// Estimates `γ τ_cor` with `γ` the broadened weak spectrum at `omega0` and
/// `τ_cor` the 1/e decay time of the envelope of `|C(t)|`.
///
/// The envelope at `t` is the maximum of `|C|` over `[t, T/2]`, where `T` is
/// the recurrence time `2π/Δω_min` of the closest mode pair. A single mode has
/// no recurrence scale and its correlation is periodic, so it is reported as
/// non-decaying, as is any bath whose envelope has not dropped below `1/e` by
/// `T/4`.
pub fn weak_coupling_diagnostic(bath: &BathSpec, omega0: f64, eta: f64) -> Result<CouplingDiagnostic> {
    if !(omega0 > 0.0) {
        return Err(Error::Domain(format!("omega0 must be positive, got {omega0}")));
    }
    let c0 = weak_correlation(bath, 0.0).norm();
    if bath.xi == 0.0 || c0 == 0.0 {
        return Ok(CouplingDiagnostic {
            value: 0.0,
            gamma: 0.0,
            tau_cor: 0.0,
            non_decaying: false,
        });
    }
    let gamma = weak_spectrum(bath, eta, 0.0)?.evaluate(omega0);
    let non_decaying = CouplingDiagnostic {
        value: f64::INFINITY,
        gamma,
        tau_cor: f64::INFINITY,
        non_decaying: true,
    };
    if bath.modes.len() < 2 {
        return Ok(non_decaying);
    }
    let mut freqs: Vec<f64> = bath.modes.iter().map(|m| m.frequency).collect();
    freqs.sort_by(f64::total_cmp);
    let min_gap = freqs.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let max_freq = freqs[freqs.len() - 1];
    let recurrence = 2.0 * PI / min_gap;
    let window = 0.5 * recurrence;
    let dt = 2.0 * PI / max_freq / DIAGNOSTIC_SAMPLES_PER_PERIOD;
    let n = ((window / dt).ceil() as usize).max(2);
    let mags: Vec<f64> = (0..=n).map(|i| weak_correlation(bath, i as f64 * window / n as f64).norm()).collect();
    // suffix maxima give the envelope from above
    let mut envelope = mags.clone();
    for i in (0..n).rev() {
        envelope[i] = envelope[i].max(envelope[i + 1]);
    }
    let threshold = c0 / std::f64::consts::E;
    let Some(idx) = envelope.iter().position(|&e| e < threshold) else {
        return Ok(non_decaying);
    };
    let tau = idx as f64 * window / n as f64;
    if tau > 0.5 * window {
        return Ok(non_decaying);
    }
    Ok(CouplingDiagnostic {
        value: gamma * tau,
        gamma,
        tau_cor: tau,
        non_decaying: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn two_mode(beta: f64) -> BathSpec {
        BathSpec::new(
            BathLabel::Cold,
            vec![BathMode::real(0.7, 0.8).unwrap(), BathMode::new(1.3, Complex64::new(0.3, -0.4)).unwrap()],
            0.6,
            beta,
        )
        .unwrap()
    }

    #[test]
    fn coth_examples() {
        assert_eq!(thermal_coth(f64::INFINITY, 3.0).unwrap(), 1.0);
        assert_relative_eq!(thermal_coth(2.0, 1.0).unwrap(), 1.3130352854993312, max_relative = 1e-10);
        let b = 1e-6;
        assert_relative_eq!(thermal_coth(b, 1.0).unwrap() * b / 2.0, 1.0, max_relative = 1e-6);
        assert!(thermal_coth(1.0, 0.0).is_err());
        assert!(thermal_coth(1.0, -2.0).is_err());
    }

    #[test]
    fn bath_validation() {
        assert!(BathSpec::new(BathLabel::Hot, vec![], 1.0, 1.0).is_err());
        let m = BathMode::real(1.0, 1.0).unwrap();
        assert!(BathSpec::new(BathLabel::Hot, vec![m, m], 1.0, 1.0).is_err());
        assert!(BathSpec::new(BathLabel::Hot, vec![m; 9], 1.0, 1.0).is_err());
        assert!(BathSpec::new(BathLabel::Hot, vec![m], -1.0, 1.0).is_err());
        assert!(BathSpec::new(BathLabel::Hot, vec![m], 1.0, 0.0).is_err());
        assert!(BathSpec::new(BathLabel::Hot, vec![m], 1.0, f64::INFINITY).is_ok());
        assert!(BathMode::real(0.0, 1.0).is_err());
        assert!(BathMode::real(1.0, 0.0).is_err());
    }

    #[test]
    fn correlation_at_zero_is_real() {
        let b = two_mode(1.5);
        let c = weak_correlation(&b, 0.0);
        let expected: f64 = b
            .modes()
            .iter()
            .map(|m| 0.36 * m.coupling_sq() * thermal_coth(1.5, m.frequency()).unwrap())
            .sum();
        assert_eq!(c.im, 0.0);
        assert_relative_eq!(c.re, expected, max_relative = 1e-14);
    }

    #[test]
    fn zero_temperature_single_mode_at_pi() {
        let b = BathSpec::single(BathLabel::Cold, 1.0, 1.0, 1.0, f64::INFINITY).unwrap();
        let c = weak_correlation(&b, PI);
        assert!((c - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_modes_sum_term_by_term() {
        let b = two_mode(0.8);
        for &t in &[0.3, -1.7, 12.5] {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in b.modes() {
                let single = BathSpec::new(BathLabel::Cold, vec![*m], 0.6, 0.8).unwrap();
                acc += weak_correlation(&single, t);
            }
            assert!((acc - weak_correlation(&b, t)).norm() < 1e-14);
        }
    }

    #[test]
    fn weak_spectrum_zero_temperature_has_only_emission_lines() {
        let b = two_mode(f64::INFINITY);
        let s = weak_spectrum(&b, 0.01, 1e-9).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.lines().iter().all(|l| l.frequency > 0.0));
    }

    #[test]
    fn weak_spectrum_single_mode_weights() {
        let b = BathSpec::single(BathLabel::Cold, 1.0, 1.0, 0.5, 1.0).unwrap();
        let s = weak_spectrum(&b, 0.01, 1e-9).unwrap();
        let e = std::f64::consts::E;
        let up = 2.0 * PI * 0.25 * (1.0 + 1.0 / (e - 1.0));
        assert_relative_eq!(s.weight_at(1.0, 1e-12).unwrap(), up, max_relative = 1e-14);
        assert_relative_eq!(s.weight_at(-1.0, 1e-12).unwrap(), up / e, max_relative = 1e-14);
    }

    #[test]
    fn weak_spectrum_sum_rule_and_kms() {
        let b = two_mode(1.1);
        let s = weak_spectrum(&b, 0.01, 1e-9).unwrap();
        assert_relative_eq!(s.total_weight(), 2.0 * PI * weak_correlation(&b, 0.0).re, max_relative = 1e-10);
        for m in b.modes() {
            let up = s.weight_at(m.frequency(), 1e-12).unwrap();
            let down = s.weight_at(-m.frequency(), 1e-12).unwrap();
            assert_relative_eq!(down, (-1.1 * m.frequency()).exp() * up, max_relative = 1e-12);
        }
    }

    #[test]
    fn diagnostic_cases() {
        let zero = BathSpec::single(BathLabel::Cold, 1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(weak_coupling_diagnostic(&zero, 1.0, 0.01).unwrap().value, 0.0);

        let single = BathSpec::single(BathLabel::Cold, 1.0, 1.0, 0.3, 2.0).unwrap();
        let d = weak_coupling_diagnostic(&single, 1.0, 0.01).unwrap();
        assert!(d.non_decaying && d.value.is_infinite());

        let modes = (0..8).map(|k| BathMode::real(0.65 + 0.1 * k as f64, 0.2).unwrap()).collect();
        let cont = BathSpec::new(BathLabel::Cold, modes, 0.4, 3.0).unwrap();
        let d = weak_coupling_diagnostic(&cont, 1.0, 0.01).unwrap();
        assert!(!d.non_decaying);
        assert!(d.value.is_finite() && d.value > 0.0);
        assert!(d.tau_cor > 0.0);
    }

    proptest! {
        #[test]
        fn correlation_is_hermitian(t in -50.0f64..50.0) {
            let b = two_mode(0.9);
            let a = weak_correlation(&b, -t);
            let c = weak_correlation(&b, t).conj();
            prop_assert!((a - c).norm() <= 1e-13 * (1.0 + c.norm()));
        }

        #[test]
        fn weak_weights_nonnegative(beta in 0.01f64..50.0, xi in 0.0f64..3.0) {
            let b = two_mode(beta).with_xi(xi).unwrap();
            let s = weak_spectrum(&b, 0.01, 1e-9).unwrap();
            prop_assert!(s.lines().iter().all(|l| l.weight >= 0.0));
        }
    }
}
