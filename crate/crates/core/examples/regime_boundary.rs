//! Where work extraction stops. Scans the drive frequency with the cold
//! phonon kept resonant with the detuning (as a dense cold bath would
//! provide), and compares the sign change of P with
//! omega_l/omega0 = 1 - beta(omega0)/beta_C.

use polaron_qhm::floquet::MachineParams;
use polaron_qhm::{thermo, BathLabel, BathSpec, Numerics, Regime};

fn main() -> polaron_qhm::Result<()> {
    let (omega0, beta_c, beta_h) = (1.0, 5.0, 2.0);
    let numerics = Numerics::for_omega0(omega0).with_eta(1e-5);
    let mut last: Option<(f64, Regime)> = None;
    let mut predicted = f64::NAN;
    for k in 0..181 {
        let omega_l = 0.05 + 0.005 * k as f64;
        let cold = BathSpec::single(BathLabel::Cold, omega0 - omega_l, 0.3, 0.1, beta_c)?;
        let hot = BathSpec::single(BathLabel::Hot, omega0, 0.3, 0.1, beta_h)?;
        let params = MachineParams::new(omega0, omega_l, 1e-4, cold, hot)?;
        let r = thermo::solve(&params, &numerics)?.report;
        predicted = 1.0 - r.beta_eff / beta_c;
        if let Some((prev, regime)) = last {
            if regime != r.regime {
                println!("{regime} -> {} between omega_l = {prev:.3} and {omega_l:.3}", r.regime);
            }
        }
        last = Some((omega_l, r.regime));
    }
    println!("predicted boundary omega_l/omega0 = {predicted:.4}");
    Ok(())
}
