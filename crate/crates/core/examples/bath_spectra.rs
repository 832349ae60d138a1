//! Weak-coupling bath correlations and line spectra for a two-mode bath,
//! plus the weak-coupling diagnostic that flags when the Born-Markov picture
//! in the original frame is questionable.

use polaron_qhm::bath::{self, BathMode};
use polaron_qhm::{BathLabel, BathSpec};

fn main() -> polaron_qhm::Result<()> {
    let modes = vec![BathMode::real(0.8, 0.5)?, BathMode::real(1.3, 0.3)?];
    let hot = BathSpec::new(BathLabel::Hot, modes, 0.4, 0.7)?;

    println!("mode  n_B(omega)  coth(beta omega/2)");
    for m in hot.modes() {
        println!(
            "{:.2}  {:.6}  {:.6}",
            m.frequency(),
            bath::bose_occupation(hot.beta(), m.frequency()),
            bath::thermal_coth(hot.beta(), m.frequency())?
        );
    }

    println!("\nt  Re C(t)  Im C(t)");
    for k in 0..6 {
        let t = k as f64 * 0.5;
        let c = bath::weak_correlation(&hot, t);
        println!("{t:.1}  {:+.6}  {:+.6}", c.re, c.im);
    }

    let s = bath::weak_spectrum(&hot, 1e-2, 1e-9)?;
    println!("\nlines (frequency, weight):");
    for l in s.lines() {
        println!("  {:+.3}  {:.6e}", l.frequency, l.weight);
    }
    // emission and absorption lines at each mode obey detailed balance
    for m in hot.modes() {
        let w = m.frequency();
        let ratio = s.weight_at(-w, 1e-9).unwrap() / s.weight_at(w, 1e-9).unwrap();
        println!("W(-{w})/W({w}) = {ratio:.6e}, e^(-beta w) = {:.6e}", (-hot.beta() * w).exp());
    }

    let d = bath::weak_coupling_diagnostic(&hot, 1.0, 1e-2)?;
    println!(
        "\ngamma(omega0) = {:.4e}, tau_cor = {}, gamma*tau_cor = {}",
        d.gamma,
        d.tau_cor,
        if d.non_decaying { "inf (discrete modes never decay)".to_string() } else { format!("{:.3e}", d.value) }
    );
    Ok(())
}
