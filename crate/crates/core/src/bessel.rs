//! Modified Bessel functions of the first kind for integer order, in the
//! exponentially scaled, logarithmic form needed by the harmonic series.
//!
//! Ratios `r_n = I_n(x)/I_{n−1}(x)` come from Miller's backward recurrence
//! `r_n = x / (2n + x r_{n+1})`, seeded with the uniform asymptotic estimate
//! far above the requested order. Absolute values follow from the generating
//! function identity `e^{−x}(I_0(x) + 2 Σ_{n≥1} I_n(x)) = 1`.

/// Returns `ln(e^{−x} I_n(x))` for `n = 0..=n_max`, `x > 0`.
///
/// Underflow is impossible: each entry is a partial sum of logarithms of
/// ratios in `(0, 1)`.
pub fn log_scaled_bessel_i(x: f64, n_max: usize) -> Vec<f64> {
    assert!(x > 0.0 && x.is_finite(), "log_scaled_bessel_i needs finite x > 0, got {x}");
    let start = n_max.max((10.0 * x.sqrt()) as usize + 40) + 60;
    let mut ratios = vec![0.0; start + 1];
    let mut r = {
        let m = (start + 1) as f64;
        x / (m + (m * m + x * x).sqrt())
    };
    for n in (1..=start).rev() {
        r = x / (2.0 * n as f64 + x * r);
        ratios[n] = r;
    }
    // log p_n = ln(I_n/I_0)
    let mut log_p = Vec::with_capacity(start + 1);
    log_p.push(0.0);
    let mut acc = 0.0;
    for &r in &ratios[1..] {
        acc += r.ln();
        log_p.push(acc);
    }
    // e^{-x} I_0 = 1 / (1 + 2 Σ p_n); sum from the small end up for accuracy
    let tail: f64 = log_p[1..].iter().rev().map(|lp| lp.exp()).sum();
    let log_i0 = -(1.0 + 2.0 * tail).ln();
    log_p.truncate(n_max + 1);
    log_p.iter().map(|lp| log_i0 + lp).collect()
}

/// `e^{−x} I_n(x)` for `n = 0..=n_max`.
pub fn scaled_bessel_i(x: f64, n_max: usize) -> Vec<f64> {
    log_scaled_bessel_i(x, n_max).into_iter().map(f64::exp).collect()
}
