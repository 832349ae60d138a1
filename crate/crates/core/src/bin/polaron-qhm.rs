//! Command-line front end. Units: ħ = k_B = 1; `beta = inf` is zero temperature.
//!
//! Exit codes: 0 success, 1 config or I/O error, 2 every sweep point failed,
//! 3 an invariant failed in `check`.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use polaron_qhm::config::{load_config, RunConfig};
use polaron_qhm::spectrum::format_float;
use polaron_qhm::{bath, check, floquet, polaron, sweep, thermo, Error};

#[derive(Parser)]
#[command(name = "polaron-qhm", version, about = "Strong-coupling continuous quantum heat machine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override a config value, e.g. `--set cold.xi=0.5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    /// Polaron-frame drive-dressed cold spectrum.
    G1,
    /// Polaron-frame mixed hot/cold spectrum.
    G2,
    /// Original-basis cold spectrum.
    Cold,
    /// Original-basis hot spectrum.
    Hot,
}

#[derive(Subcommand)]
enum Command {
    /// Print a coupling spectrum as frequency,weight lines.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "g1")]
        which: Which,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve the steady state and print density matrix, currents and rates.
    Steady {
        #[command(flatten)]
        common: Common,
    },
    /// Run the configured parameter sweep.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the physics invariants; exit 3 if any fails.
    Check {
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load(common: &Common) -> Result<RunConfig, Error> {
    load_config(&common.config, &common.set)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Spectrum { common, which, output } => {
            let cfg = load(&common)?;
            let (p, n) = (&cfg.machine, &cfg.numerics);
            let s = match which {
                Which::G1 => polaron::spectrum_g1(&p.cold, p.rabi, n),
                Which::G2 => polaron::spectrum_g2(&p.cold, &p.hot, n).map(|(s, _)| s),
                Which::Cold => bath::weak_spectrum(&p.cold, n.broadening_eta, n.merge_tol),
                Which::Hot => bath::weak_spectrum(&p.hot, n.broadening_eta, n.merge_tol),
            };
            let s = match s {
                Ok(s) => s,
                Err(e) => return numerical_failure(e),
            };
            match output {
                Some(path) => s.write_csv(io::BufWriter::new(std::fs::File::create(path)?))?,
                None => s.write_csv(&mut out)?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Steady { common } => {
            let cfg = load(&common)?;
            let sol = match thermo::solve(&cfg.machine, &cfg.numerics) {
                Ok(s) => s,
                Err(e) => return numerical_failure(e),
            };
            write_steady(&sol, &mut out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { common } => {
            let cfg = load(&common)?;
            let rows = sweep::run_and_write(&cfg, &mut out)?;
            if !rows.is_empty() && rows.iter().all(|r| r.failed()) {
                eprintln!("error: every sweep point failed");
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { common } => {
            let cfg = load(&common)?;
            let report = match check::run_check(&cfg) {
                Ok(r) => r,
                Err(Error::Io(e)) => return Err(Error::Io(e)),
                Err(Error::Csv(e)) => return Err(Error::Csv(e)),
                Err(e) => return numerical_failure(e),
            };
            report.write_csv(&mut out)?;
            Ok(if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
    }
}

fn numerical_failure(e: Error) -> Result<ExitCode, Error> {
    eprintln!("error: {e}");
    Ok(ExitCode::from(2))
}

fn write_steady(sol: &thermo::Solution, out: &mut dyn Write) -> Result<(), Error> {
    let f = format_float;
    let rho = &sol.steady.rho;
    let r = &sol.report;
    writeln!(out, "# polaron-qhm v1")?;
    writeln!(out, "quantity,value")?;
    let scalars = [
        ("rho_ee", rho[(0, 0)].re),
        ("rho_gg", rho[(1, 1)].re),
        ("rho_eg_re", rho[(0, 1)].re),
        ("rho_eg_im", rho[(0, 1)].im),
        ("residual", sol.steady.residual),
        ("trace_error", sol.steady.trace_error),
        ("min_eigenvalue", sol.steady.min_eigenvalue),
        ("A", sol.franck_condon),
        ("Omega_r", sol.omega_r),
        ("J1", r.j1),
        ("J2", r.j2),
        ("P", r.power),
        ("J_C", r.j_c),
        ("beta_omega0", r.beta_eff),
        ("lambda_omega0", r.lambda),
        ("eta", r.eta.unwrap_or(f64::NAN)),
        ("eta_naive", r.eta_naive.unwrap_or(f64::NAN)),
        ("eta_carnot", r.eta_carnot),
    ];
    for (k, v) in scalars {
        writeln!(out, "{k},{}", f(v))?;
    }
    writeln!(out, "regime,{}", r.regime)?;
    writeln!(out)?;
    writeln!(out, "channel,source,q,quasi_frequency,rate_frequency,rate")?;
    for t in &sol.liouvillian.terms {
        let c = &t.component;
        let source = match c.source {
            floquet::Source::Raising => "sigma_plus",
            floquet::Source::Lowering => "sigma_minus",
        };
        writeln!(
            out,
            "{},{source},{},{},{},{}",
            c.channel.index(),
            c.q,
            f(c.omega),
            f(t.rate_frequency),
            f(t.rate)
        )?;
    }
    Ok(())
}
