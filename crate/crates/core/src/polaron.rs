//! Polaron-frame quantities: the Franck–Condon factor `A`, the renormalized
//! Rabi frequency, the transformed correlation functions, and the transformed
//! coupling spectra `G̃₁` and `G̃₂` as exact line lists.
//!
//! For one cold mode with `a = 4ξ²|g|²/ω²`, `y = βω` and `n̄ = 1/(e^y − 1)`,
//! the displacement-operator correlation is
//!
//! ```text
//! A² exp(a[(n̄+1)e^{−iωt} + n̄ e^{iωt}]) = Σ_n W_n e^{−inωt}
//! W_n = e^{−a tanh(y/4)} · e^{−x}I_{|n|}(x) · e^{ny/2},   x = a / sinh(y/2)
//! ```
//!
//! a Skellam distribution over the harmonic index `n` (difference of two
//! Poisson counts with means `a(n̄+1)` and `a n̄`). At zero temperature it
//! reduces to the Poisson weights `e^{−a} aⁿ/n!`. Several modes combine by
//! discrete convolution.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bath::{self, coth_unchecked, BathLabel, BathMode, BathSpec};
use crate::bessel::log_scaled_bessel_i;
use crate::error::{Error, Result};
use crate::kms::{ExchangeTerm, SpectralDecomposition};
use crate::numerics::{Numerics, PRUNE_REL};
use crate::spectrum::{merge_lines, LineSpectrum, SpectralLine};

/// Above this `βω` the thermal corrections are below `e^{−700}` and the
/// zero-temperature Poisson form is used.
const COLD_LIMIT_BETA_OMEGA: f64 = 700.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PolaronParams {
    /// Displacements `α_k = ξ_C g_k / ω_k` per cold mode.
    pub alphas: Vec<Complex64>,
    /// Franck–Condon factor `A = ⟨A_±⟩`.
    pub a: f64,
    /// `Ω_r = Ω A`.
    pub omega_r: f64,
}

impl PolaronParams {
    pub fn new(cold: &BathSpec, rabi: f64) -> Self {
        let alphas = cold
            .modes()
            .iter()
            .map(|m| m.coupling() * (cold.xi() / m.frequency()))
            .collect();
        let a = franck_condon_a(cold);
        Self {
            alphas,
            a,
            omega_r: renormalized_rabi(rabi, a),
        }
    }
}

/// `A = exp(−2ξ² Σ_k |g_k/ω_k|² coth(βω_k/2))`.
pub fn franck_condon_a(cold: &BathSpec) -> f64 {
    (-2.0 * cold.xi() * cold.xi() * cold.reorganization_sum()).exp()
}

pub fn renormalized_rabi(rabi: f64, a: f64) -> f64 {
    rabi * a
}

/// Exponent of `A² e^{4ξ²ΣΛ_k(t)/ω_k²}`, i.e. `4ξ²Σ|g/ω|²(coth(cos ωt − 1) − i sin ωt)`.
fn displacement_log_correlation(cold: &BathSpec, t: f64) -> Complex64 {
    let xi2 = cold.xi() * cold.xi();
    cold.modes()
        .iter()
        .map(|m| {
            let s = (m.frequency() * t).sin();
            let k = 4.0 * xi2 * m.coupling_sq() / (m.frequency() * m.frequency());
            // 1 − cos via half angle keeps precision near t = 0
            let one_minus_cos = 2.0 * (0.5 * m.frequency() * t).sin().powi(2);
            Complex64::new(-k * coth_unchecked(cold.beta(), m.frequency()) * one_minus_cos, -k * s)
        })
        .sum()
}

/// `⟨A₊(t) A₋(0)⟩ = A² e^{4ξ²ΣΛ_k(t)/ω_k²}`.
pub fn displacement_correlation(cold: &BathSpec, t: f64) -> Complex64 {
    displacement_log_correlation(cold, t).exp()
}

/// `⟨F̃₁†(t) F̃₁(0)⟩ = (Ω/2)² (A² e^{4ξ²ΣΛ_k(t)/ω_k²} − A²)`.
pub fn transformed_correlation_1(cold: &BathSpec, rabi: f64, t: f64) -> Complex64 {
    let a2 = franck_condon_a(cold).powi(2);
    (displacement_correlation(cold, t) - a2) * (0.25 * rabi * rabi)
}

/// [`displacement_correlation`] continued to complex time. Sampling along
/// `t − iτ` scales a line at `ν` by `e^{−ντ}`, which is how the tilted
/// oracle resolves faint lines.
pub fn displacement_correlation_at(cold: &BathSpec, z: Complex64) -> Complex64 {
    let xi2 = cold.xi() * cold.xi();
    cold.modes()
        .iter()
        .map(|m| {
            let wz = z * m.frequency();
            let k = 4.0 * xi2 * m.coupling_sq() / (m.frequency() * m.frequency());
            let one_minus_cos = (wz * 0.5).sin().powi(2) * 2.0;
            -(one_minus_cos * coth_unchecked(cold.beta(), m.frequency()) + Complex64::i() * wz.sin()) * k
        })
        .sum::<Complex64>()
        .exp()
}

pub fn transformed_correlation_1_at(cold: &BathSpec, rabi: f64, z: Complex64) -> Complex64 {
    let a2 = franck_condon_a(cold).powi(2);
    (displacement_correlation_at(cold, z) - a2) * (0.25 * rabi * rabi)
}

pub fn transformed_correlation_2_at(cold: &BathSpec, hot: &BathSpec, z: Complex64) -> Complex64 {
    displacement_correlation_at(cold, z) * bath::weak_correlation_at(hot, z)
}

/// `⟨F̃₂†(t) F̃₂(0)⟩ = ⟨A₊(t)A₋(0)⟩ · ξ_H² Σ_k Λ^H_k(t)`.
pub fn transformed_correlation_2(cold: &BathSpec, hot: &BathSpec, t: f64) -> Complex64 {
    displacement_correlation(cold, t) * bath::weak_correlation(hot, t)
}

/// Fourier weights of the cold displacement correlation: a line of weight
/// `W` at frequency `ν` stands for a term `W e^{−iνt}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicWeights {
    lines: Vec<SpectralLine>,
    includes_elastic: bool,
    /// The elastic constant `A²` (product over modes).
    elastic: f64,
    /// Weight lost to truncation of the harmonic series.
    omitted: f64,
}

impl HarmonicWeights {
    /// `{0: 1}`, the identity for convolution.
    pub fn identity() -> Self {
        Self {
            lines: vec![SpectralLine::new(0.0, 1.0)],
            includes_elastic: true,
            elastic: 1.0,
            omitted: 0.0,
        }
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn includes_elastic(&self) -> bool {
        self.includes_elastic
    }

    pub fn elastic(&self) -> f64 {
        self.elastic
    }

    pub fn omitted(&self) -> f64 {
        self.omitted
    }

    pub fn total(&self) -> f64 {
        self.lines.iter().map(|l| l.weight).sum()
    }

    /// Weight of the line at `frequency` (within `tol`), zero when absent.
    pub fn weight_at(&self, frequency: f64, tol: f64) -> f64 {
        let idx = self.lines.partition_point(|l| l.frequency < frequency - tol);
        self.lines
            .get(idx)
            .filter(|l| (l.frequency - frequency).abs() <= tol)
            .map_or(0.0, |l| l.weight)
    }

    /// Removes the elastic constant `A²` from the zero-frequency line.
    pub fn without_elastic(mut self, tol: f64) -> Self {
        if !self.includes_elastic {
            return self;
        }
        let idx = self.lines.partition_point(|l| l.frequency < -tol);
        if let Some(l) = self.lines.get_mut(idx).filter(|l| l.frequency.abs() <= tol) {
            l.weight = (l.weight - self.elastic).max(0.0);
        }
        self.lines.retain(|l| l.weight > 0.0);
        self.includes_elastic = false;
        self
    }
}

/// Harmonic weights of a single-mode cold bath.
pub fn harmonic_weights(cold: &BathSpec, include_elastic: bool, numerics: &Numerics) -> Result<HarmonicWeights> {
    if cold.modes().len() != 1 {
        return Err(Error::Domain(format!(
            "harmonic_weights takes a single-mode bath, got {} modes",
            cold.modes().len()
        )));
    }
    let w = mode_harmonics(&cold.modes()[0], cold.xi(), cold.beta(), numerics)?;
    Ok(if include_elastic {
        w
    } else {
        w.without_elastic(numerics.merge_tol)
    })
}

/// Harmonic weights of an arbitrary cold bath: per-mode series convolved.
pub fn cold_harmonic_weights(cold: &BathSpec, include_elastic: bool, numerics: &Numerics) -> Result<HarmonicWeights> {
    let mut acc = HarmonicWeights::identity();
    for m in cold.modes() {
        let w = mode_harmonics(m, cold.xi(), cold.beta(), numerics)?;
        acc = convolve_weights(&acc, &w, numerics.merge_tol);
    }
    Ok(if include_elastic {
        acc
    } else {
        acc.without_elastic(numerics.merge_tol)
    })
}

fn mode_harmonics(mode: &BathMode, xi: f64, beta: f64, numerics: &Numerics) -> Result<HarmonicWeights> {
    let omega = mode.frequency();
    let a = 4.0 * xi * xi * mode.coupling_sq() / (omega * omega);
    let elastic = (-a * coth_unchecked(beta, omega)).exp();
    if a == 0.0 {
        return Ok(HarmonicWeights::identity());
    }
    let cap = numerics.max_harmonics;
    let y = beta * omega;
    let mut weights: Vec<(i64, f64)> = if y.is_infinite() || y > COLD_LIMIT_BETA_OMEGA {
        let ln_a = a.ln();
        let mut ln_fact = 0.0;
        (0..=cap as i64)
            .map(|n| {
                if n > 0 {
                    ln_fact += (n as f64).ln();
                }
                (n, (-a + n as f64 * ln_a - ln_fact).exp())
            })
            .collect()
    } else {
        let ln_x = a.ln() - ln_sinh(0.5 * y);
        let log_i = log_scaled_bessel_i(ln_x.exp(), cap);
        let base = -a * (0.25 * y).tanh();
        (-(cap as i64)..=cap as i64)
            .map(|n| (n, (base + log_i[n.unsigned_abs() as usize] + 0.5 * n as f64 * y).exp()))
            .collect()
    };
    let total: f64 = weights.iter().map(|(_, w)| w).sum();
    let omitted = (1.0 - total).max(0.0);
    if omitted > numerics.bessel_tol {
        return Err(Error::NonConvergence { omitted, cap });
    }
    let max = weights.iter().map(|(_, w)| *w).fold(0.0, f64::max);
    // prune ±n together so every kept harmonic keeps its detailed-balance
    // partner, even when the Boltzmann-suppressed side alone is negligible
    let mirror: Vec<f64> = weights.iter().map(|&(n, _)| weight_of(&weights, -n)).collect();
    let mut kept = mirror.iter();
    weights.retain(|(_, w)| w.max(*kept.next().expect("one mirror per weight")) > PRUNE_REL * max);
    Ok(HarmonicWeights {
        lines: weights
            .into_iter()
            .map(|(n, w)| SpectralLine::new(n as f64 * omega, w))
            .collect(),
        includes_elastic: true,
        elastic,
        omitted,
    })
}

fn weight_of(weights: &[(i64, f64)], n: i64) -> f64 {
    weights
        .binary_search_by_key(&n, |&(k, _)| k)
        .map_or(0.0, |i| weights[i].1)
}

/// Weight of the line at `−ν` for every line `ν` of a sorted list (zero when
/// absent).
pub(crate) fn mirror_weights(lines: &[SpectralLine], tol: f64) -> Vec<f64> {
    lines
        .iter()
        .map(|l| {
            let i = lines.partition_point(|m| m.frequency < -l.frequency - tol);
            lines
                .get(i)
                .filter(|m| (m.frequency + l.frequency).abs() <= tol)
                .map_or(0.0, |m| m.weight)
        })
        .collect()
}

/// `ln sinh(u)` for `u > 0`, stable for large `u`.
fn ln_sinh(u: f64) -> f64 {
    if u > 20.0 {
        u + (-(-2.0 * u).exp()).ln_1p() - std::f64::consts::LN_2
    } else {
        u.sinh().ln()
    }
}

/// Discrete convolution over composite frequencies `ν_a + ν_b`; coincident
/// frequencies are merged.
pub fn convolve_weights(a: &HarmonicWeights, b: &HarmonicWeights, merge_tol: f64) -> HarmonicWeights {
    let mut lines = Vec::with_capacity(a.lines.len() * b.lines.len());
    let max = a.lines.iter().map(|l| l.weight).fold(0.0, f64::max) * b.lines.iter().map(|l| l.weight).fold(0.0, f64::max);
    let (ma, mb) = (mirror_weights(&a.lines, merge_tol), mirror_weights(&b.lines, merge_tol));
    for (la, wa) in a.lines.iter().zip(&ma) {
        for (lb, wb) in b.lines.iter().zip(&mb) {
            let w = la.weight * lb.weight;
            // keep a product whenever its mirror image is kept
            if w.max(wa * wb) > PRUNE_REL * max {
                lines.push(SpectralLine::new(la.frequency + lb.frequency, w));
            }
        }
    }
    HarmonicWeights {
        lines: merge_lines(lines, merge_tol),
        includes_elastic: a.includes_elastic && b.includes_elastic,
        elastic: a.elastic * b.elastic,
        omitted: a.omitted + b.omitted,
    }
}

/// `G̃₁` line spectrum: `2π(Ω/2)²` times the cold harmonic weights with the
/// elastic `A²` removed. Total weight `2π(Ω/2)²(1 − A²)`.
pub fn spectrum_g1(cold: &BathSpec, rabi: f64, numerics: &Numerics) -> Result<LineSpectrum> {
    if cold.label() != BathLabel::Cold {
        return Err(Error::InvalidBath("spectrum_g1 needs the cold bath".into()));
    }
    let eta = numerics.broadening_eta;
    if rabi == 0.0 || cold.xi() == 0.0 {
        return Ok(LineSpectrum::empty(eta));
    }
    let scale = 2.0 * PI * 0.25 * rabi * rabi;
    let w = cold_harmonic_weights(cold, false, numerics)?;
    LineSpectrum::new(
        w.lines.iter().map(|l| SpectralLine::new(l.frequency, scale * l.weight)),
        eta,
        numerics.merge_tol,
    )
}

/// `G̃₂` line spectrum together with its per-line decomposition into hot-mode
/// and cold-harmonic exchange terms. The cold factor keeps its elastic part.
pub fn spectrum_g2(
    cold: &BathSpec,
    hot: &BathSpec,
    numerics: &Numerics,
) -> Result<(LineSpectrum, SpectralDecomposition)> {
    if cold.label() != BathLabel::Cold || hot.label() != BathLabel::Hot {
        return Err(Error::InvalidBath("spectrum_g2 needs (cold, hot) baths".into()));
    }
    let eta = numerics.broadening_eta;
    let hot_lines = bath::weak_spectrum(hot, eta, numerics.merge_tol)?;
    let cold_w = cold_harmonic_weights(cold, true, numerics)?;
    let max = hot_lines.lines().iter().map(|l| l.weight).fold(0.0, f64::max)
        * cold_w.lines.iter().map(|l| l.weight).fold(0.0, f64::max);
    let mut terms = Vec::with_capacity(hot_lines.len() * cold_w.lines.len());
    let mh = mirror_weights(hot_lines.lines(), numerics.merge_tol);
    let mc = mirror_weights(&cold_w.lines, numerics.merge_tol);
    for (h, wh) in hot_lines.lines().iter().zip(&mh) {
        for (c, wc) in cold_w.lines.iter().zip(&mc) {
            let w = h.weight * c.weight;
            if w.max(wh * wc) > PRUNE_REL * max {
                terms.push(ExchangeTerm {
                    omega_h: h.frequency,
                    omega_c: c.frequency,
                    weight: w,
                });
            }
        }
    }
    let decomposition = SpectralDecomposition::from_terms(terms, numerics.merge_tol);
    let spectrum = decomposition.to_spectrum(eta)?;
    Ok((spectrum, decomposition))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn cold(freq: f64, g: f64, xi: f64, beta: f64) -> BathSpec {
        BathSpec::single(BathLabel::Cold, freq, g, xi, beta).unwrap()
    }

    fn num() -> Numerics {
        Numerics::default()
    }

    #[test]
    fn franck_condon_examples() {
        assert_eq!(franck_condon_a(&cold(1.0, 1.0, 0.0, 1.0)), 1.0);
        assert_relative_eq!(franck_condon_a(&cold(1.0, 1.0, 0.5, f64::INFINITY)), (-0.5f64).exp(), max_relative = 1e-15);
        let two = BathSpec::new(
            BathLabel::Cold,
            vec![BathMode::real(0.8, 0.6).unwrap(), BathMode::real(1.7, 1.2).unwrap()],
            0.7,
            2.0,
        )
        .unwrap();
        let product = franck_condon_a(&cold(0.8, 0.6, 0.7, 2.0)) * franck_condon_a(&cold(1.7, 1.2, 0.7, 2.0));
        assert_relative_eq!(franck_condon_a(&two), product, max_relative = 1e-14);
    }

    #[test]
    fn log_a_is_quadratic_in_xi() {
        let c = cold(0.9, 0.7, 1.0, 1.3);
        let la = |xi: f64| franck_condon_a(&c.clone().with_xi(xi).unwrap()).ln();
        let slope = (la(0.8).abs().ln() - la(0.2).abs().ln()) / (0.8f64.ln() - 0.2f64.ln());
        assert!((slope - 2.0).abs() < 1e-10, "slope {slope}");
        let mut prev = 1.0;
        for i in 1..50 {
            let a = la(i as f64 * 0.05).exp();
            assert!(a < prev && a > 0.0);
            prev = a;
        }
    }

    #[test]
    fn renormalized_rabi_examples() {
        assert_eq!(renormalized_rabi(0.1, 1.0), 0.1);
        assert_relative_eq!(renormalized_rabi(0.1, 0.60653), 0.060653, max_relative = 1e-14);
        let p = PolaronParams::new(&cold(1.0, 1.0, 0.5, f64::INFINITY), 0.1);
        assert!(p.omega_r <= 0.1);
        assert_relative_eq!(p.alphas[0].re, 0.5);
    }

    #[test]
    fn correlation_one_identities() {
        let c0 = cold(1.0, 1.0, 0.0, 1.0);
        assert_eq!(transformed_correlation_1(&c0, 0.3, 1.234).norm(), 0.0);
        let c = cold(1.1, 0.8, 0.6, 1.7);
        let a = franck_condon_a(&c);
        let v = transformed_correlation_1(&c, 0.3, 0.0);
        assert_relative_eq!(v.re, 0.0225 * (1.0 - a * a), max_relative = 1e-13);
        assert!(v.im.abs() < 1e-16);
    }

    #[test]
    fn correlation_one_matches_composition_with_weak_correlation() {
        let c = cold(1.1, 0.8, 0.6, 1.7);
        let a = franck_condon_a(&c);
        let m = c.modes()[0];
        for &t in &[0.37, -2.2, 9.0] {
            let lambda = bath::weak_correlation(&c, t);
            let direct = (0.3 * a / 2.0).powi(2) * ((lambda * 4.0 / (m.frequency() * m.frequency())).exp() - 1.0);
            assert!((direct - transformed_correlation_1(&c, 0.3, t)).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_coupling_is_identity() {
        let w = harmonic_weights(&cold(1.0, 1.0, 0.0, 1.0), true, &num()).unwrap();
        assert_eq!(w.lines(), &[SpectralLine::new(0.0, 1.0)]);
    }

    #[test]
    fn skellam_weights_match_poisson_convolution() {
        // independent route: W_n = Σ_k Pois(μ₁; n + k) Pois(μ₂; k)
        let (omega, beta, a) = (1.0, 1.0, 1.0);
        let c = cold(omega, 1.0, 0.5, beta);
        let w = harmonic_weights(&c, true, &num()).unwrap();
        let nbar = bath::bose_occupation(beta, omega);
        let (mu1, mu2) = (a * (nbar + 1.0), a * nbar);
        let pois = |mu: f64, k: i64| -> f64 {
            if k < 0 {
                return 0.0;
            }
            let lf: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
            (-mu + k as f64 * mu.ln() - lf).exp()
        };
        for n in -12i64..=20 {
            let reference: f64 = (0..200).map(|k| pois(mu1, n + k) * pois(mu2, k)).sum();
            let got = w.weight_at(n as f64, 1e-9);
            if reference > 1e-300 {
                assert_relative_eq!(got, reference, max_relative = 1e-11);
            }
        }
        assert_relative_eq!(w.total(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn zero_temperature_weights_are_poisson() {
        let c = cold(0.5, 1.0, 0.25, f64::INFINITY);
        let a: f64 = 4.0 * 0.0625 / 0.25;
        let w = harmonic_weights(&c, true, &num()).unwrap();
        assert!(w.lines().iter().all(|l| l.frequency >= 0.0));
        assert_relative_eq!(w.weight_at(0.0, 1e-9), (-a).exp(), max_relative = 1e-14);
        assert_relative_eq!(w.weight_at(1.5, 1e-9), (-a).exp() * a.powi(3) / 6.0, max_relative = 1e-13);
        // elastic part equals W_0 exactly at T = 0
        let g1 = harmonic_weights(&c, false, &num()).unwrap();
        assert_eq!(g1.weight_at(0.0, 1e-9), 0.0);
    }

    #[test]
    fn detailed_balance_of_harmonics() {
        let (omega, beta) = (0.9, 1.4);
        let w = harmonic_weights(&cold(omega, 1.0, 0.8, beta), true, &num()).unwrap();
        for n in 1..6 {
            let up = w.weight_at(n as f64 * omega, 1e-9);
            let down = w.weight_at(-(n as f64) * omega, 1e-9);
            assert_relative_eq!(down / up, (-(n as f64) * beta * omega).exp(), max_relative = 1e-12);
        }
    }

    #[test]
    fn non_convergence_past_cap() {
        let n = Numerics {
            max_harmonics: 10,
            ..num()
        };
        let err = harmonic_weights(&cold(1.0, 1.0, 3.0, 1.0), true, &n).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { cap: 10, .. }));
    }

    #[test]
    fn convolution_identity_and_total() {
        let w = harmonic_weights(&cold(0.7, 1.0, 0.6, 2.0), true, &num()).unwrap();
        let id = HarmonicWeights::identity();
        assert_eq!(convolve_weights(&w, &id, 1e-9).lines(), w.lines());
        let v = harmonic_weights(&cold(1.3, 0.5, 0.9, 0.7), false, &num()).unwrap();
        let c = convolve_weights(&w, &v, 1e-9);
        assert_relative_eq!(c.total(), w.total() * v.total(), max_relative = 1e-12);
    }

    #[test]
    fn convolution_of_incommensurate_modes_enumerates_pairs() {
        let w = harmonic_weights(&cold(1.0, 1.0, 0.3, 2.0), true, &num()).unwrap();
        let v = harmonic_weights(&cold(std::f64::consts::SQRT_2, 1.0, 0.3, 2.0), true, &num()).unwrap();
        let c = convolve_weights(&w, &v, 1e-9);
        let max = w.lines().iter().map(|l| l.weight).fold(0.0, f64::max) * v.lines().iter().map(|l| l.weight).fold(0.0, f64::max);
        // a product survives when it or its mirror image clears the floor
        let weight = |lines: &[SpectralLine], f: f64| {
            lines.iter().find(|l| (l.frequency - f).abs() < 1e-9).map_or(0.0, |l| l.weight)
        };
        let expected = w
            .lines()
            .iter()
            .flat_map(|a| v.lines().iter().map(move |b| (a, b)))
            .filter(|(a, b)| {
                let mirror = weight(w.lines(), -a.frequency) * weight(v.lines(), -b.frequency);
                (a.weight * b.weight).max(mirror) > PRUNE_REL * max
            })
            .count();
        assert_eq!(c.lines().len(), expected);
        assert!(expected > w.lines().len() + v.lines().len());
    }

    #[test]
    fn complex_time_continuation_matches_real_axis() {
        let c = cold(0.7, 0.8, 0.6, 1.3);
        let h = BathSpec::single(BathLabel::Hot, 1.1, 0.4, 0.5, 0.4).unwrap();
        for &t in &[0.0, 0.3, 2.9, -4.1] {
            let z = Complex64::new(t, 0.0);
            assert!((displacement_correlation_at(&c, z) - displacement_correlation(&c, t)).norm() < 1e-14);
            assert!((transformed_correlation_1_at(&c, 0.3, z) - transformed_correlation_1(&c, 0.3, t)).norm() < 1e-15);
            assert!((transformed_correlation_2_at(&c, &h, z) - transformed_correlation_2(&c, &h, t)).norm() < 1e-14);
        }
        // at t = −iβ/2 the displacement correlation is real (detailed balance)
        let v = displacement_correlation_at(&c, Complex64::new(0.0, -0.5 * 1.3));
        assert!(v.im.abs() < 1e-14 * v.re.abs());
    }

    #[test]
    fn pruning_keeps_faint_partners_of_two_mode_lines() {
        // the Boltzmann-suppressed side of far harmonics falls below the
        // pruning floor; the composite lines must still pair exactly
        let modes = vec![BathMode::real(0.25, 0.2).unwrap(), BathMode::real(0.4, 0.2).unwrap()];
        let c = BathSpec::new(BathLabel::Cold, modes, 0.5, 5.0).unwrap();
        let g1 = spectrum_g1(&c, 0.01, &num()).unwrap();
        let r = crate::kms::check_kms_g1(&g1, 5.0, 1e-9);
        assert!(r.max_violation < 1e-12, "{r:?}");
    }

    #[test]
    fn g1_empty_without_coupling_and_sum_rule() {
        assert!(spectrum_g1(&cold(1.0, 1.0, 0.0, 1.0), 0.2, &num()).unwrap().is_empty());
        let c = cold(1.0, 1.0, 1.0, 1.0);
        let s = spectrum_g1(&c, 0.2, &num()).unwrap();
        let a = franck_condon_a(&c);
        assert_relative_eq!(s.total_weight(), 2.0 * PI * 0.01 * (1.0 - a * a), max_relative = 1e-10);
        // second harmonic present once W_{±2} is appreciable
        assert!(s.weight_at(2.0, 1e-9).unwrap() > 1e-6);
    }

    #[test]
    fn g2_without_cold_coupling_is_hot_weak_spectrum() {
        let c = cold(1.0, 1.0, 0.0, 2.0);
        let hot = BathSpec::single(BathLabel::Hot, 1.0, 0.7, 0.3, 0.5).unwrap();
        let (s, _) = spectrum_g2(&c, &hot, &num()).unwrap();
        let weak = bath::weak_spectrum(&hot, 0.01, 1e-9).unwrap();
        assert_eq!(s.lines(), weak.lines());
    }

    #[test]
    fn g2_lines_are_integer_combinations() {
        let c = BathSpec::new(
            BathLabel::Cold,
            vec![BathMode::real(0.3, 1.0).unwrap(), BathMode::real(0.5, 0.6).unwrap()],
            0.2,
            2.0,
        )
        .unwrap();
        let hot = BathSpec::single(BathLabel::Hot, 1.0, 1.0, 0.2, 1.0).unwrap();
        let (s, d) = spectrum_g2(&c, &hot, &num()).unwrap();
        assert_eq!(s.len(), d.lines().len());
        for l in d.lines() {
            for t in &l.terms {
                assert!((t.omega_h.abs() - 1.0).abs() < 1e-12);
                // ω_C = 0.3 n₁ + 0.5 n₂ = 0.1 (3n₁ + 5n₂): a multiple of 0.1
                let k = t.omega_c / 0.1;
                assert!((k - k.round()).abs() < 1e-6);
                assert!((t.omega_h + t.omega_c - l.frequency).abs() < 1e-9);
            }
        }
    }

    proptest! {
        #[test]
        fn harmonic_sum_rule(freq in 0.3f64..3.0, g in 0.1f64..1.0, xi in 0.0f64..1.0, beta in 0.2f64..30.0) {
            let w = match harmonic_weights(&cold(freq, g, xi, beta), true, &num()) {
                Ok(w) => w,
                // very hot, very strong draws legitimately need more than the cap
                Err(Error::NonConvergence { omitted, .. }) => {
                    prop_assert!(omitted > num().bessel_tol);
                    return Ok(());
                }
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            prop_assert!((w.total() - 1.0).abs() < 1e-9);
            prop_assert!(w.lines().iter().all(|l| l.weight >= 0.0));
        }
    }
}
