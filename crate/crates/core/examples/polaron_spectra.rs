//! Polaron-frame coupling spectra. Prints the Franck-Condon factor and the
//! renormalized Rabi frequency across coupling strengths, then the G1 and G2
//! lines of one machine, checked against an FFT of the closed-form
//! correlation functions.

use std::f64::consts::PI;

use polaron_qhm::{oracle, polaron, BathLabel, BathSpec, Numerics};

fn main() -> polaron_qhm::Result<()> {
    let rabi = 0.2;
    println!("xi  A  Omega_r");
    for xi in [0.0, 0.25, 0.5, 1.0, 2.0] {
        let cold = BathSpec::single(BathLabel::Cold, 1.0, 1.0, xi, 1.0)?;
        let a = polaron::franck_condon_a(&cold);
        println!("{xi:.2}  {a:.6e}  {:.6e}", polaron::renormalized_rabi(rabi, a));
    }

    let cold = BathSpec::single(BathLabel::Cold, 1.0, 1.0, 0.5, 1.0)?;
    let hot = BathSpec::single(BathLabel::Hot, 2.5, 0.3, 0.5, 0.2)?;
    let numerics = Numerics::default();
    let g1 = polaron::spectrum_g1(&cold, rabi, &numerics)?;
    let (g2, _) = polaron::spectrum_g2(&cold, &hot, &numerics)?;

    // The correlations are 2π-periodic here (all frequencies are multiples
    // of 0.5), so each FFT bin holds exactly one line. Complex-time tilts
    // resolve lines far below the largest one.
    let taus: Vec<f64> = (-8..=8).map(|k| k as f64).collect();
    let n = 1 << 14;
    let fft1 = oracle::tilted_spectrum_oracle(|z| polaron::transformed_correlation_1_at(&cold, rabi, z), 2.0 * PI, n, &taus)?;
    let fft2 = oracle::tilted_spectrum_oracle(|z| polaron::transformed_correlation_2_at(&cold, &hot, z), 4.0 * PI, n, &taus)?;

    for (name, s, fft) in [("G1", &g1, &fft1), ("G2", &g2, &fft2)] {
        println!("\n{name}: {} lines, total weight {:.6e}", s.len(), s.total_weight());
        println!("  frequency  weight  relative deviation from FFT");
        for l in s.lines().iter().filter(|l| l.weight > 1e-10 * s.total_weight()) {
            let dev = (fft.area_near(l.frequency) - l.weight).abs() / l.weight;
            println!("  {:+.2}  {:.6e}  {dev:.1e}", l.frequency, l.weight);
        }
    }
    let a = polaron::franck_condon_a(&cold);
    println!(
        "\nG1 sum rule: {:.12e} vs 2 pi (Omega/2)^2 (1 - A^2) = {:.12e}",
        g1.total_weight(),
        2.0 * PI * 0.25 * rabi * rabi * (1.0 - a * a)
    );
    Ok(())
}
