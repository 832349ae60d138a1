//! Output power against coupling strength. Weak coupling gives |P| ~ xi^2;
//! at strong coupling the Franck-Condon factor shuts the drive off, so the
//! power turns over. The last column compares with the ultra-strong
//! envelope e^(-4 xi^2 S)/xi^2 (normalized at the largest xi).
//!
//! Writes `power_turnover.svg` to the working directory.

use polaron_qhm::config::{load_config, SweepParameter};
use polaron_qhm::{sweep, thermo};

fn main() -> polaron_qhm::Result<()> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/turnover.toml");
    let cfg = load_config(&path, &[])?;
    let rows = sweep::run_sweep(&cfg)?;

    let xs: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let env = thermo::asymptotic_power_envelope(&xs, &cfg.machine.cold.clone().with_xi(1.0)?);
    let last = rows.len() - 1;
    let scale = rows[last].power.abs() / env[last];
    println!("xi  P  regime  |P|/envelope");
    for (r, e) in rows.iter().zip(&env).step_by(10) {
        println!("{:.4e}  {:+.4e}  {}  {:.3e}", r.value, r.power, r.cell("regime"), r.power.abs() / (scale * e));
    }
    let peak = rows
        .iter()
        .max_by(|a, b| a.power.abs().total_cmp(&b.power.abs()))
        .expect("sweep has points");
    println!("\npeak |P| = {:.4e} at xi = {:.4}", peak.power.abs(), peak.value);

    let x_label = match cfg.sweep.as_ref().map(|s| s.parameter) {
        Some(SweepParameter::XiBoth) => "xi (both baths)",
        _ => "value",
    };
    std::fs::write("power_turnover.svg", sweep::render_svg(&rows, "P", x_label, true, true))?;
    println!("wrote power_turnover.svg");
    Ok(())
}
