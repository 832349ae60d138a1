//! Local temperature of the mixed hot/cold channel. Every G2 line is a
//! product of a hot-mode exchange and a cold-phonon exchange, so its
//! detailed-balance ratio defines an inverse temperature between (or even
//! outside) the two bath temperatures, and the cold fraction lambda.

use polaron_qhm::{kms, polaron, BathLabel, BathSpec, Numerics};

fn main() -> polaron_qhm::Result<()> {
    let (beta_c, beta_h) = (4.0, 1.0);
    let cold = BathSpec::single(BathLabel::Cold, 0.4, 0.5, 0.8, beta_c)?;
    let hot = BathSpec::single(BathLabel::Hot, 1.0, 0.3, 0.5, beta_h)?;
    let numerics = Numerics::default();
    let (g2, d) = polaron::spectrum_g2(&cold, &hot, &numerics)?;

    println!("beta_C = {beta_c}, beta_H = {beta_h}");
    println!("omega  weight  beta(omega)  lambda(omega)");
    for l in d.lines().iter().filter(|l| l.frequency > 0.0 && l.weight > 1e-8 * d.total_weight()) {
        let lt = kms::local_temperature_beta(&d, l.frequency, beta_c, beta_h, numerics.merge_tol)?;
        println!("{:.2}  {:.4e}  {:+.4}  {:+.4}", l.frequency, l.weight, lt.beta_eff, lt.lambda);
    }

    let report = kms::generalized_kms_check(&g2, &d, beta_c, beta_h, numerics.merge_tol);
    println!(
        "\ngeneralized detailed balance: worst violation {:.2e} over {} line pairs and {} exchange terms",
        report.max_violation(),
        report.lines.pairs_checked,
        report.terms.pairs_checked
    );
    // lines above the hot mode draw on absorbed cold phonons (lambda > 0),
    // lines below it return phonons to the cold bath (lambda < 0)
    Ok(())
}
