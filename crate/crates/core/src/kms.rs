//! Detailed-balance checks and frequency-local temperatures.
//!
//! `G̃₁` obeys the ordinary KMS condition at the cold temperature. `G̃₂` mixes
//! a hot-bath exchange `ω_H` with cold harmonics `ω_C`, so each composite line
//! at `ω = ω_H + ω_C` balances with its own effective temperature
//!
//! ```text
//! e^{−β(ω)ω} = Σ_j K_j e^{−β_H ω_{H,j} − β_C ω_{C,j}},   λ(ω) = (β(ω) − β_H)/(β_C − β_H)
//! ```
//!
//! where `K_j` are the relative weights of the terms making up the line.

use crate::error::{Error, Result};
use crate::numerics::DEFAULT_WEIGHT_FLOOR;
use crate::spectrum::{LineSpectrum, SpectralLine};

/// Below this separation the two bath temperatures are treated as equal.
pub const DEGENERATE_BETA_TOL: f64 = 1e-12;

/// One `(ω_H, ω_C)` exchange channel feeding a composite `G̃₂` line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeTerm {
    pub omega_h: f64,
    pub omega_c: f64,
    pub weight: f64,
}

impl ExchangeTerm {
    /// `β_H ω_H + β_C ω_C`, with `∞ · 0 = 0` so zero-temperature baths work.
    pub fn boltzmann_exponent(&self, beta_c: f64, beta_h: f64) -> f64 {
        mul_inf(beta_h, self.omega_h) + mul_inf(beta_c, self.omega_c)
    }
}

fn mul_inf(beta: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        0.0
    } else {
        beta * omega
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedLine {
    pub frequency: f64,
    pub weight: f64,
    pub terms: Vec<ExchangeTerm>,
}

/// Per-line record of the exchange terms behind a `G̃₂` spectrum.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectralDecomposition {
    lines: Vec<DecomposedLine>,
}

impl SpectralDecomposition {
    /// Groups terms by composite frequency `ω_H + ω_C` (within `merge_tol` of
    /// the group's first frequency) and sums weights.
    pub fn from_terms(mut terms: Vec<ExchangeTerm>, merge_tol: f64) -> Self {
        terms.retain(|t| t.weight > 0.0);
        terms.sort_by(|a, b| (a.omega_h + a.omega_c).total_cmp(&(b.omega_h + b.omega_c)));
        let mut lines: Vec<DecomposedLine> = Vec::new();
        let mut group_start = f64::NEG_INFINITY;
        let mut moment = 0.0;
        for t in terms {
            let f = t.omega_h + t.omega_c;
            match lines.last_mut() {
                Some(last) if f - group_start <= merge_tol => {
                    last.weight += t.weight;
                    moment += t.weight * f;
                    last.frequency = moment / last.weight;
                    last.terms.push(t);
                }
                _ => {
                    group_start = f;
                    moment = t.weight * f;
                    lines.push(DecomposedLine {
                        frequency: f,
                        weight: t.weight,
                        terms: vec![t],
                    });
                }
            }
        }
        Self { lines }
    }

    pub fn lines(&self) -> &[DecomposedLine] {
        &self.lines
    }

    pub fn total_weight(&self) -> f64 {
        self.lines.iter().map(|l| l.weight).sum()
    }

    pub fn find(&self, omega: f64, tol: f64) -> Option<&DecomposedLine> {
        let idx = self.lines.partition_point(|l| l.frequency < omega - tol);
        self.lines.get(idx).filter(|l| (l.frequency - omega).abs() <= tol)
    }

    /// The merged line spectrum; line for line identical to the decomposition.
    pub fn to_spectrum(&self, eta: f64) -> Result<LineSpectrum> {
        LineSpectrum::new(
            self.lines.iter().map(|l| SpectralLine::new(l.frequency, l.weight)),
            eta,
            0.0,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalTemperature {
    pub omega: f64,
    pub beta_eff: f64,
    pub lambda: f64,
}

/// Outcome of a detailed-balance check over paired `±ω` lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct KmsReport {
    /// Largest relative violation over checked pairs.
    pub max_violation: f64,
    /// Frequency of the worst pair.
    pub worst_frequency: Option<f64>,
    pub pairs_checked: usize,
    /// Positive frequencies above the floor whose partner is missing or
    /// below the floor.
    pub unpaired: Vec<f64>,
}

impl KmsReport {
    fn record(&mut self, omega: f64, violation: f64) {
        self.pairs_checked += 1;
        if violation > self.max_violation || violation.is_nan() {
            self.max_violation = violation;
            self.worst_frequency = Some(omega);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GeneralizedKmsReport {
    /// `|W(−ω) − e^{−β(ω)ω} W(ω)| / W(ω)` maximized over lines.
    pub lines: KmsReport,
    /// Each exchange term against its mirrored term, `e^{−β_Hω_H − β_Cω_C}`.
    pub terms: KmsReport,
}

impl GeneralizedKmsReport {
    pub fn max_violation(&self) -> f64 {
        self.lines.max_violation.max(self.terms.max_violation)
    }
}

/// Pairs lines at `±ω` whose weights both exceed `floor` and applies `f(ω, W₊, W₋)`.
fn for_each_pair(
    lines: &[SpectralLine],
    floor: f64,
    tol: f64,
    report: &mut KmsReport,
    mut f: impl FnMut(f64, f64, f64) -> f64,
) {
    for l in lines.iter().filter(|l| l.frequency > tol && l.weight > floor) {
        let idx = lines.partition_point(|m| m.frequency < -l.frequency - tol);
        match lines.get(idx).filter(|m| (m.frequency + l.frequency).abs() <= tol) {
            Some(m) if m.weight > floor => {
                let v = f(l.frequency, l.weight, m.weight);
                report.record(l.frequency, v);
            }
            _ => report.unpaired.push(l.frequency),
        }
    }
}

fn floor_for(total: f64) -> f64 {
    DEFAULT_WEIGHT_FLOOR * total
}

/// Max over paired lines of `|W(−ω) e^{β_C ω} / W(ω) − 1|`.
pub fn check_kms_g1(s: &LineSpectrum, beta_c: f64, merge_tol: f64) -> KmsReport {
    let mut report = KmsReport::default();
    for_each_pair(s.lines(), floor_for(s.total_weight()), merge_tol, &mut report, |omega, wp, wm| {
        // compare in log form so large β_C ω cannot overflow
        ((wm.ln() - wp.ln() + beta_c * omega).exp() - 1.0).abs()
    });
    report
}

/// `β(ω)` and `λ(ω)` from the terms of the decomposed line at `omega`.
pub fn local_temperature_beta(
    d: &SpectralDecomposition,
    omega: f64,
    beta_c: f64,
    beta_h: f64,
    tol: f64,
) -> Result<LocalTemperature> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("local temperature needs ω > 0, got {omega}")));
    }
    let line = d.find(omega, tol).ok_or(Error::MissingFrequency(omega))?;
    if line.weight <= floor_for(d.total_weight()) {
        return Err(Error::MissingFrequency(omega));
    }
    let beta_eff = line_beta(line, beta_c, beta_h);
    if (beta_c - beta_h).abs() < DEGENERATE_BETA_TOL {
        return Err(Error::DegenerateTemperatures { beta_eff });
    }
    Ok(LocalTemperature {
        omega: line.frequency,
        beta_eff,
        lambda: mixing_fraction(beta_eff, beta_c, beta_h),
    })
}

/// `λ = (β − β_H)/(β_C − β_H)`; zero-temperature cold baths give the limit
/// `λ → 0` for finite `β`.
pub fn mixing_fraction(beta_eff: f64, beta_c: f64, beta_h: f64) -> f64 {
    if beta_c.is_infinite() && beta_eff.is_finite() {
        return 0.0;
    }
    (beta_eff - beta_h) / (beta_c - beta_h)
}

/// `−ln(Σ K_j e^{−x_j})/ω` evaluated as a stable log-sum-exp.
pub(crate) fn line_beta(line: &DecomposedLine, beta_c: f64, beta_h: f64) -> f64 {
    let exps: Vec<(f64, f64)> = line
        .terms
        .iter()
        .map(|t| (t.weight / line.weight, -t.boltzmann_exponent(beta_c, beta_h)))
        .collect();
    let m = exps.iter().map(|&(_, e)| e).fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    if m == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = exps.iter().map(|&(k, e)| k * (e - m).exp()).sum();
    -(m + s.ln()) / line.frequency
}

/// Generalized KMS at line level and per exchange term.
pub fn generalized_kms_check(
    s: &LineSpectrum,
    d: &SpectralDecomposition,
    beta_c: f64,
    beta_h: f64,
    merge_tol: f64,
) -> GeneralizedKmsReport {
    let mut report = GeneralizedKmsReport::default();
    let floor = floor_for(s.total_weight());
    for_each_pair(s.lines(), floor, merge_tol, &mut report.lines, |omega, wp, wm| {
        match d.find(omega, merge_tol) {
            Some(line) => {
                let b = line_beta(line, beta_c, beta_h);
                ((wm.ln() - wp.ln() + b * omega).exp() - 1.0).abs()
            }
            None => f64::NAN,
        }
    });

    let mut terms: Vec<ExchangeTerm> = d.lines().iter().flat_map(|l| l.terms.iter().copied()).collect();
    terms.sort_by(|a, b| a.omega_h.total_cmp(&b.omega_h).then(a.omega_c.total_cmp(&b.omega_c)));
    let lookup = |oh: f64, oc: f64| -> Option<f64> {
        let start = terms.partition_point(|t| t.omega_h < oh - merge_tol);
        terms[start..]
            .iter()
            .take_while(|t| t.omega_h <= oh + merge_tol)
            .find(|t| (t.omega_c - oc).abs() <= merge_tol)
            .map(|t| t.weight)
    };
    for t in terms.iter().filter(|t| t.omega_h + t.omega_c > merge_tol && t.weight > floor) {
        match lookup(-t.omega_h, -t.omega_c) {
            Some(w) if w > floor => {
                let x = t.boltzmann_exponent(beta_c, beta_h);
                let v = ((w.ln() - t.weight.ln() + x).exp() - 1.0).abs();
                report.terms.record(t.omega_h + t.omega_c, v);
            }
            _ => report.terms.unpaired.push(t.omega_h + t.omega_c),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn term(h: f64, c: f64, w: f64) -> ExchangeTerm {
        ExchangeTerm {
            omega_h: h,
            omega_c: c,
            weight: w,
        }
    }

    #[test]
    fn single_hot_term_gives_hot_temperature() {
        let d = SpectralDecomposition::from_terms(vec![term(1.3, 0.0, 0.4)], 1e-9);
        let lt = local_temperature_beta(&d, 1.3, 2.0, 0.5, 1e-9).unwrap();
        assert_relative_eq!(lt.beta_eff, 0.5, max_relative = 1e-14);
        assert!(lt.lambda.abs() < 1e-14);
    }

    #[test]
    fn single_mixed_term_is_a_log_identity() {
        let (bh, bc) = (0.4, 3.0);
        let d = SpectralDecomposition::from_terms(vec![term(0.7, 0.5, 1.0)], 1e-9);
        let lt = local_temperature_beta(&d, 1.2, bc, bh, 1e-9).unwrap();
        assert_relative_eq!(lt.beta_eff * 1.2, bh * 0.7 + bc * 0.5, max_relative = 1e-14);
        assert_relative_eq!(lt.lambda, 0.5 / 1.2, max_relative = 1e-12);
    }

    #[test]
    fn two_term_mixture() {
        let d = SpectralDecomposition::from_terms(vec![term(1.0, 0.0, 0.5), term(-1.0, 2.0, 0.5)], 1e-9);
        assert_eq!(d.lines().len(), 1);
        let lt = local_temperature_beta(&d, 1.0, 2.0, 1.0, 1e-9).unwrap();
        let expected = -((0.5 * (-1.0f64).exp() + 0.5 * (-3.0f64).exp()).ln());
        assert_relative_eq!(lt.beta_eff, expected, max_relative = 1e-14);
        assert_relative_eq!(2.0 * lt.lambda + 1.0 * (1.0 - lt.lambda), lt.beta_eff, max_relative = 1e-12);
    }

    #[test]
    fn mixing_fraction_is_not_clamped() {
        // a hot quantum above ω with a cold quantum returned: λ = −ω_C/ω < 0
        let d = SpectralDecomposition::from_terms(vec![term(1.5, -0.5, 1.0)], 1e-9);
        let lt = local_temperature_beta(&d, 1.0, 3.0, 0.5, 1e-9).unwrap();
        assert_relative_eq!(lt.lambda, -0.5, max_relative = 1e-12);
        let d = SpectralDecomposition::from_terms(vec![term(-0.5, 1.5, 1.0)], 1e-9);
        let lt = local_temperature_beta(&d, 1.0, 3.0, 0.5, 1e-9).unwrap();
        assert_relative_eq!(lt.lambda, 1.5, max_relative = 1e-12);
    }

    #[test]
    fn degenerate_and_missing() {
        let d = SpectralDecomposition::from_terms(vec![term(1.0, 0.0, 1.0)], 1e-9);
        match local_temperature_beta(&d, 1.0, 1.5, 1.5, 1e-9) {
            Err(Error::DegenerateTemperatures { beta_eff }) => assert_relative_eq!(beta_eff, 1.5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            local_temperature_beta(&d, 2.0, 1.0, 0.5, 1e-9),
            Err(Error::MissingFrequency(_))
        ));
    }

    #[test]
    fn zero_temperature_exponents() {
        let t = term(1.0, 0.0, 1.0);
        assert_eq!(t.boltzmann_exponent(f64::INFINITY, 0.5), 0.5);
    }

    #[test]
    fn kms_g1_detects_corruption() {
        let beta = 1.7;
        let good = LineSpectrum::new(
            [SpectralLine::new(1.0, 2.0), SpectralLine::new(-1.0, 2.0 * (-beta as f64).exp())],
            0.01,
            1e-9,
        )
        .unwrap();
        assert!(check_kms_g1(&good, beta, 1e-9).max_violation < 1e-14);
        let bad = LineSpectrum::new(
            [SpectralLine::new(1.0, 2.0), SpectralLine::new(-1.0, 1.01 * 2.0 * (-beta as f64).exp())],
            0.01,
            1e-9,
        )
        .unwrap();
        let r = check_kms_g1(&bad, beta, 1e-9);
        assert_relative_eq!(r.max_violation, 0.01, max_relative = 1e-10);
        assert_eq!(r.worst_frequency, Some(1.0));
        let empty = LineSpectrum::empty(0.01);
        assert_eq!(check_kms_g1(&empty, beta, 1e-9).max_violation, 0.0);
    }

    #[test]
    fn one_sided_lines_are_reported() {
        let s = LineSpectrum::new([SpectralLine::new(1.0, 1.0)], 0.01, 1e-9).unwrap();
        let r = check_kms_g1(&s, 1.0, 1e-9);
        assert_eq!(r.unpaired, vec![1.0]);
        assert_eq!(r.pairs_checked, 0);
    }

    #[test]
    fn equal_temperatures_restore_standard_kms() {
        let beta = 0.8;
        let terms = vec![
            term(1.0, 0.0, 1.0),
            term(-1.0, 0.0, (-beta as f64).exp()),
            term(1.0, 0.5, 0.3),
            term(-1.0, -0.5, 0.3 * (-1.5 * beta as f64).exp()),
        ];
        let d = SpectralDecomposition::from_terms(terms, 1e-9);
        let s = d.to_spectrum(0.01).unwrap();
        let r = generalized_kms_check(&s, &d, beta, beta, 1e-9);
        assert!(r.max_violation() < 1e-14);
        for l in d.lines().iter().filter(|l| l.frequency > 0.0) {
            assert_relative_eq!(line_beta(l, beta, beta), beta, max_relative = 1e-13);
        }
    }
}
