//! Drives a sweep from a TOML config with command-line style overrides,
//! the same path the `polaron-qhm sweep` subcommand takes, and runs the
//! invariant checks on it.
//!
//!     cargo run --example config_sweep -- configs/engine.toml sweep.points=12

use polaron_qhm::config::load_config;
use polaron_qhm::{check, sweep};

fn main() -> polaron_qhm::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/engine.toml").to_string());
    let overrides: Vec<String> = args.collect();
    let cfg = load_config(path.as_ref(), &overrides)?;

    let rows = sweep::run_and_write(&cfg, &mut std::io::stdout().lock())?;
    eprintln!("{} points, {} failed", rows.len(), rows.iter().filter(|r| r.failed()).count());

    let report = check::run_check(&cfg)?;
    for r in report.rows.iter().filter(|r| !r.pass) {
        eprintln!("invariant {} failed: {:.3e} > {:.1e}", r.name, r.measured, r.tolerance);
    }
    eprintln!("check: {}", if report.all_pass() { "all invariants hold" } else { "FAILED" });
    Ok(())
}
