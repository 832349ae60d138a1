//! Reference spectra from sampled correlation functions.
//!
//! The transform convention is `G(ω) = ∫ e^{iωt} C(t) dt`, so a term
//! `c e^{−iνt}` in `C(t)` shows up as a line of area `2πc` at `+ν`. For a
//! correlation sampled over exactly one period each frequency bin holds a
//! whole line, which is what the Bessel-series spectra are compared against.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Smallest sample count accepted by [`fft_spectrum_oracle`].
pub const MIN_ORACLE_SAMPLES: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct SampledSpectrum {
    /// Bin centers in increasing order.
    pub frequencies: Vec<f64>,
    /// Line area per bin, `Δω · dt Σ_j C(t_j) e^{iωt_j}`.
    pub areas: Vec<f64>,
    /// Largest imaginary part seen; nonzero only for non-Hermitian input.
    pub max_imag: f64,
    pub nyquist: f64,
}

impl SampledSpectrum {
    pub fn bin_width(&self) -> f64 {
        self.frequencies[1] - self.frequencies[0]
    }

    /// Area of the bin nearest `omega`.
    pub fn area_near(&self, omega: f64) -> f64 {
        let w = self.bin_width();
        let k = ((omega - self.frequencies[0]) / w).round();
        if k < 0.0 || k as usize >= self.areas.len() {
            return 0.0;
        }
        self.areas[k as usize]
    }

    /// Whether content up to `max_frequency` would fold back past Nyquist.
    pub fn aliasing_warning(&self, max_frequency: f64) -> bool {
        max_frequency.abs() >= self.nyquist
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }
}

/// Discrete Fourier transform of `samples` taken at `t_j = j·dt`, scaled to
/// approximate `∫ e^{iωt} C(t) dt` per bin.
pub fn fft_spectrum_oracle(samples: &[Complex64], dt: f64) -> Result<SampledSpectrum> {
    let n = samples.len();
    if !n.is_power_of_two() || n < MIN_ORACLE_SAMPLES {
        return Err(Error::Domain(format!(
            "oracle sample count must be a power of two ≥ {MIN_ORACLE_SAMPLES}, got {n}"
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("oracle step must be positive, got {dt}")));
    }
    let mut buf = samples.to_vec();
    // inverse transform carries the e^{+i 2π jk/n} kernel
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let dw = 2.0 * PI / (n as f64 * dt);
    let half = n / 2;
    let mut frequencies = Vec::with_capacity(n);
    let mut areas = Vec::with_capacity(n);
    let mut max_imag: f64 = 0.0;
    // reorder to k = −n/2 .. n/2 − 1
    for i in 0..n {
        let k = (i + half) % n;
        let signed = i as f64 - half as f64;
        let v = buf[k] * (dt * dw);
        frequencies.push(signed * dw);
        areas.push(v.re);
        max_imag = max_imag.max(v.im.abs());
    }
    Ok(SampledSpectrum {
        frequencies,
        areas,
        max_imag,
        nyquist: half as f64 * dw,
    })
}

/// Samples `f` at `n` equally spaced points over `[0, period)`.
pub fn sample_periodic(f: impl Fn(f64) -> Complex64, period: f64, n: usize) -> Vec<Complex64> {
    let dt = period / n as f64;
    (0..n).map(|j| f(j as f64 * dt)).collect()
}

/// Oracle for spectra whose faint lines sit far below the double-precision
/// floor of a single transform. The correlation is sampled along `t − iτ`
/// for each tilt `τ`; a line at `ν` then carries weight `W e^{−ντ}`, so a
/// suitable tilt lifts it to a sizeable share of the total. Each bin is
/// taken from the tilt where it is the largest fraction of the sampled
/// mass, then scaled back by `e^{ντ}`. `f` must be the analytic
/// continuation of the correlation and periodic in `t` with `period`.
pub fn tilted_spectrum_oracle(
    f: impl Fn(Complex64) -> Complex64,
    period: f64,
    n: usize,
    taus: &[f64],
) -> Result<SampledSpectrum> {
    if taus.is_empty() {
        return Err(Error::Domain("tilted oracle needs at least one tilt".into()));
    }
    let dt = period / n as f64;
    let mut best: Option<SampledSpectrum> = None;
    let mut share = vec![0.0; n];
    for &tau in taus {
        let samples: Vec<Complex64> = (0..n).map(|j| f(Complex64::new(j as f64 * dt, -tau))).collect();
        if samples.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            // the continuation overflowed at this tilt
            continue;
        }
        let s = fft_spectrum_oracle(&samples, dt)?;
        let mass: f64 = s.areas.iter().map(|a| a.abs()).sum();
        let best = best.get_or_insert_with(|| SampledSpectrum {
            areas: vec![0.0; n],
            max_imag: 0.0,
            ..s.clone()
        });
        for k in 0..n {
            let frac = s.areas[k].abs() / mass;
            if frac > share[k] || (tau == 0.0 && share[k] == 0.0) {
                share[k] = frac;
                best.areas[k] = s.areas[k] * (s.frequencies[k] * tau).exp();
            }
        }
        if tau == 0.0 {
            best.max_imag = s.max_imag;
        }
    }
    best.ok_or_else(|| Error::Domain("every oracle tilt overflowed".into()))
}

/// Area `2π c_m` of harmonic `m` of a `period`-periodic correlation, by a
/// direct DFT with compensated (Neumaier) summation. Slower than the FFT but
/// free of the transform's cross-bin rounding, for checking faint lines.
pub fn dft_line_weight(f: impl Fn(f64) -> Complex64, period: f64, n: usize, m: i64) -> Complex64 {
    let dt = period / n as f64;
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    for j in 0..n {
        // reduce the phase index modulo n so the angle stays exact
        let phase_idx = (m.rem_euclid(n as i64) as u128 * j as u128 % n as u128) as f64;
        let (s, c) = (2.0 * PI * phase_idx / n as f64).sin_cos();
        let v = f(j as f64 * dt) * Complex64::new(c, s);
        re.add(v.re);
        im.add(v.im);
    }
    Complex64::new(re.sum(), im.sum()) * (2.0 * PI / n as f64)
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}
