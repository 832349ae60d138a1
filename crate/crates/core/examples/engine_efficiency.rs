//! Efficiency bookkeeping when the mixed channel also exchanges heat with
//! the cold bath. Here the G2 line at omega0 pairs a hot quantum of
//! omega0 + omega_c with a cold phonon handed back, so lambda(omega0) < 0:
//! the naive efficiency -P/J2 can beat Carnot, the corrected one cannot.

use polaron_qhm::floquet::MachineParams;
use polaron_qhm::{thermo, BathLabel, BathSpec, Numerics, Regime};

fn main() -> polaron_qhm::Result<()> {
    let (omega0, beta_c, beta_h) = (1.0, 4.0, 1.0);
    let numerics = Numerics::for_omega0(omega0).with_eta(1e-5);
    println!("eta_Carnot = {:.4}", thermo::carnot_efficiency(beta_c, beta_h));
    println!("omega_l  lambda0  eta_naive  eta  regime");
    for k in 0..10 {
        let omega_l = 0.02 + 0.1 * k as f64;
        // cold phonon resonant with the detuning, hot mode one phonon above omega0
        let wc = omega0 - omega_l;
        let cold = BathSpec::single(BathLabel::Cold, wc, 0.3, 0.1, beta_c)?;
        let hot = BathSpec::single(BathLabel::Hot, omega0 + wc, 0.3, 0.3, beta_h)?;
        let params = MachineParams::new(omega0, omega_l, 1e-4, cold, hot)?;
        let r = thermo::solve(&params, &numerics)?.report;
        match r.regime {
            Regime::Engine => println!(
                "{omega_l:.2}  {:+.3}  {:.4}  {:.4}  engine",
                r.lambda,
                r.eta_naive.unwrap_or(f64::NAN),
                r.eta.unwrap_or(f64::NAN)
            ),
            Regime::Refrigerator => println!(
                "{omega_l:.2}  {:+.3}  COP = {:.4} (Carnot COP {:.4})  refrigerator",
                r.lambda,
                r.cop.unwrap_or(f64::NAN),
                r.cop_carnot
            ),
            Regime::Dissipator => println!("{omega_l:.2}  {:+.3}  -  -  dissipator", r.lambda),
        }
    }
    Ok(())
}
