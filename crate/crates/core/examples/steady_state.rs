//! Floquet-Lindblad steady state of one machine: the dressed basis, every
//! harmonic jump operator with its rate, the steady density matrix and the
//! heat currents and power it carries.

use polaron_qhm::floquet::{self, MachineParams};
use polaron_qhm::{thermo, BathLabel, BathSpec, Numerics};

fn main() -> polaron_qhm::Result<()> {
    let cold = BathSpec::single(BathLabel::Cold, 0.37, 0.3, 0.5, 8.0)?;
    let hot = BathSpec::single(BathLabel::Hot, 1.0, 0.3, 0.5, 1.0)?;
    let params = MachineParams::new(1.0, 0.63, 0.05, cold, hot)?;
    let sol = thermo::solve(&params, &Numerics::default())?;

    let basis = floquet::dressed_basis(&params);
    println!(
        "A = {:.6}, Omega_r = {:.6e}, delta = {:.3}, Omega' = {:.6}, theta = {:.4e}",
        sol.franck_condon,
        sol.omega_r,
        params.delta(),
        basis.omega_prime,
        basis.theta
    );
    println!("Fourier completeness error: {:.1e}", floquet::completeness_error(&floquet::fourier_decompose(&basis)));

    println!("\nchannel  source  q  quasi-frequency  rate frequency  rate");
    for t in &sol.liouvillian.terms {
        let c = &t.component;
        println!(
            "{}  {:?}  {:+}  {:+.6}  {:+.6}  {:.4e}",
            c.channel.index(),
            c.source,
            c.q,
            c.omega,
            t.rate_frequency,
            t.rate
        );
    }

    let s = &sol.steady;
    println!("\nrho = [[{:.6e}, {:.3e}], [{:.3e}, {:.6e}]]", s.rho[(0, 0)].re, s.rho[(0, 1)], s.rho[(1, 0)], s.rho[(1, 1)].re);
    println!(
        "residual {:.1e}, trace error {:.1e}, min eigenvalue {:.3e}, generator trace-preservation {:.1e}",
        s.residual,
        s.trace_error,
        s.min_eigenvalue,
        sol.liouvillian.trace_preservation_error()
    );
    let r = &sol.report;
    println!(
        "\nJ1 = {:+.4e}, J2 = {:+.4e}, P = {:+.4e}  ({}), first law residual {:.1e}",
        r.j1,
        r.j2,
        r.power,
        r.regime,
        r.j1 + r.j2 + r.power
    );
    Ok(())
}
