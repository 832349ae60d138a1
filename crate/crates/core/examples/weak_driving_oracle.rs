//! Full Floquet-Lindblad currents against the weak-driving closed forms
//!   J1 = delta B, J2 = -omega0 B, P = omega_l B,
//!   B = G1 G2/(G1 + G2) (e^(-beta_C delta) - e^(-beta(omega0) omega0)).
//! The closed forms drop the Boltzmann factors from the total relaxation
//! rate and evaluate the rates at delta rather than the dressed splitting,
//! so agreement is best for cold baths, narrow lines and small Omega_r/delta.

use polaron_qhm::floquet::MachineParams;
use polaron_qhm::{polaron, thermo, BathLabel, BathSpec, Numerics};

fn main() -> polaron_qhm::Result<()> {
    let (omega0, omega_l) = (1.0, 0.6);
    let delta = omega0 - omega_l;
    let cold = BathSpec::single(BathLabel::Cold, delta, 0.3, 0.5, 14.0 / delta)?;
    let hot = BathSpec::single(BathLabel::Hot, omega0, 0.1, 0.1, 6.0 / omega0)?;
    let a = polaron::franck_condon_a(&cold);

    println!("Omega_r/delta  eta/delta  J1 full/closed  J2 full/closed  P full/closed");
    for (ratio, eta) in [(0.005, 2e-3), (0.02, 5e-3), (0.05, 1e-2), (0.2, 1e-2), (0.5, 1e-2)] {
        let params = MachineParams::new(omega0, omega_l, ratio * delta / a, cold.clone(), hot.clone())?;
        let sol = thermo::solve(&params, &Numerics::for_omega0(omega0).with_eta(eta * delta))?;
        let closed = thermo::analytic_weak_driving(&params, sol.g1_at_delta(), sol.g2_at_omega0(), sol.report.beta_eff)?;
        let c = sol.currents;
        println!(
            "{ratio:.3}  {eta:.0e}  {:.5}  {:.5}  {:.5}",
            c.j1 / closed.j1,
            c.j2 / closed.j2,
            c.power / closed.power
        );
    }
    Ok(())
}
