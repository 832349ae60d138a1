//! Run configuration: a TOML file plus `key=value` overrides.
//!
//! ```toml
//! [machine]
//! omega0 = 1.0
//! omega_l = 0.6
//! Omega = 0.02
//!
//! [cold]
//! xi = 0.3
//! beta = 4.0              # `inf` means zero temperature
//! modes = [{ frequency = 0.4, coupling = 1.0 }]
//!
//! [hot]
//! xi = 0.1
//! beta = 0.5
//! modes = [{ frequency = 1.0, coupling = [0.6, 0.8] }]   # complex as [re, im]
//!
//! [numerics]              # all optional
//! broadening_eta = 0.01   # default 1e-2 * omega0
//!
//! [sweep]                 # optional
//! parameter = "xi_both"   # xi_c | xi_h | xi_both | omega_l | Omega | beta_C | beta_H
//! from = 0.01
//! to = 10.0
//! points = 200
//! scale = "log"           # or "linear"
//!
//! [output]                # optional
//! csv_path = "power.csv"
//! svg_path = "power.svg"
//! svg_column = "P"
//! svg_log_y = true
//! columns = ["value", "P", "regime"]
//! ```
//!
//! Overrides address keys by dotted path, with numeric segments indexing
//! arrays: `cold.xi=0.5`, `hot.modes.0.frequency=1.2`, `sweep.scale="linear"`.
//! Values are parsed as TOML and fall back to plain strings. Relative paths
//! are resolved against the directory of the config file.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use crate::bath::{BathLabel, BathMode, BathSpec};
use crate::error::{Error, Result};
use crate::floquet::MachineParams;
use crate::numerics::Numerics;
use crate::sweep::COLUMNS;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    machine: RawMachine,
    cold: RawBath,
    hot: RawBath,
    #[serde(default)]
    numerics: RawNumerics,
    sweep: Option<RawSweep>,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    check: RawCheck,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMachine {
    omega0: f64,
    omega_l: f64,
    #[serde(rename = "Omega")]
    rabi: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBath {
    xi: f64,
    beta: f64,
    modes: Vec<RawMode>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMode {
    frequency: f64,
    coupling: RawCoupling,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawCoupling {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNumerics {
    broadening_eta: Option<f64>,
    bessel_tol: Option<f64>,
    max_harmonics: Option<usize>,
    rank_tol: Option<f64>,
    weight_floor: Option<f64>,
    merge_tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    parameter: SweepParameter,
    from: f64,
    to: f64,
    points: usize,
    #[serde(default)]
    scale: Scale,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv_path: Option<PathBuf>,
    svg_path: Option<PathBuf>,
    svg_column: Option<String>,
    #[serde(default)]
    svg_log_y: bool,
    columns: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCheck {
    g1_spectrum: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "xi_c")]
    XiC,
    #[serde(rename = "xi_h")]
    XiH,
    /// Both strengths set to the same value.
    #[serde(rename = "xi_both")]
    XiBoth,
    #[serde(rename = "omega_l")]
    OmegaL,
    #[serde(rename = "Omega")]
    Rabi,
    #[serde(rename = "beta_C")]
    BetaC,
    #[serde(rename = "beta_H")]
    BetaH,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::XiC => "xi_c",
            SweepParameter::XiH => "xi_h",
            SweepParameter::XiBoth => "xi_both",
            SweepParameter::OmegaL => "omega_l",
            SweepParameter::Rabi => "Omega",
            SweepParameter::BetaC => "beta_C",
            SweepParameter::BetaH => "beta_H",
        }
    }

    /// The machine with this parameter set to `value`.
    pub fn apply(self, base: &MachineParams, value: f64) -> Result<MachineParams> {
        let mut p = base.clone();
        match self {
            SweepParameter::XiC => p.cold = p.cold.with_xi(value)?,
            SweepParameter::XiH => p.hot = p.hot.with_xi(value)?,
            SweepParameter::XiBoth => {
                p.cold = p.cold.with_xi(value)?;
                p.hot = p.hot.with_xi(value)?;
            }
            SweepParameter::OmegaL => p.omega_l = value,
            SweepParameter::Rabi => p.rabi = value,
            SweepParameter::BetaC => p.cold = p.cold.with_beta(value)?,
            SweepParameter::BetaH => p.hot = p.hot.with_beta(value)?,
        }
        MachineParams::new(p.omega0, p.omega_l, p.rabi, p.cold, p.hot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub scale: Scale,
}

impl SweepSpec {
    /// Grid values in order, endpoints included exactly.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.from;
                }
                if i == n - 1 {
                    return self.to;
                }
                let f = i as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.from + f * (self.to - self.from),
                    Scale::Log => (self.from.ln() + f * (self.to.ln() - self.from.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    pub csv_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
    pub svg_column: String,
    pub svg_log_y: bool,
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CheckSpec {
    /// Replacement `G̃₁` line list (CSV) for the KMS check.
    pub g1_spectrum: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub machine: MachineParams,
    pub numerics: Numerics,
    pub sweep: Option<SweepSpec>,
    pub output: OutputSpec,
    pub check: CheckSpec,
}

/// Reads, overrides and validates a config file.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), format!("cannot read: {e}")))?;
    let base = path.parent().unwrap_or(Path::new(""));
    parse_config(&text, base, overrides)
}

/// As [`load_config`] from an in-memory document.
pub fn parse_config(text: &str, base_dir: &Path, overrides: &[String]) -> Result<RunConfig> {
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::ConfigParse(e.to_string()))?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let raw: RawConfig = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| Error::ConfigParse(e.to_string()))?;
    validate(raw, base_dir)
}

/// Applies one `dotted.path=value` override to a parsed document.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, value) = assignment
        .split_once('=')
        .ok_or_else(|| Error::config(assignment, "override must look like key=value"))?;
    let key = key.trim();
    let value = parse_value(value.trim());
    let segments: Vec<&str> = key.split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        return Err(Error::config(key, "empty path segment"));
    }
    let mut root = toml::Value::Table(std::mem::take(table));
    let result = set_path(&mut root, &segments, value, key);
    if let toml::Value::Table(t) = root {
        *table = t;
    }
    result
}

fn set_path(root: &mut toml::Value, segments: &[&str], value: toml::Value, key: &str) -> Result<()> {
    let (last, parents) = segments.split_last().expect("non-empty path");
    let mut cur = root;
    for seg in parents {
        cur = child(cur, seg, key)?;
    }
    match cur {
        toml::Value::Table(t) => {
            t.insert((*last).to_string(), value);
        }
        toml::Value::Array(a) => {
            let i = index(last, a.len(), key)?;
            a[i] = value;
        }
        _ => return Err(Error::config(key, "cannot set a field inside a scalar")),
    }
    Ok(())
}

fn child<'a>(v: &'a mut toml::Value, seg: &str, key: &str) -> Result<&'a mut toml::Value> {
    match v {
        toml::Value::Table(t) => Ok(t
            .entry(seg.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))),
        toml::Value::Array(a) => {
            let i = index(seg, a.len(), key)?;
            Ok(&mut a[i])
        }
        _ => Err(Error::config(key, "cannot descend into a scalar")),
    }
}

fn index(seg: &str, len: usize, key: &str) -> Result<usize> {
    let i: usize = seg
        .parse()
        .map_err(|_| Error::config(key, format!("array index expected, got `{seg}`")))?;
    if i >= len {
        return Err(Error::config(key, format!("index {i} out of range (length {len})")));
    }
    Ok(i)
}

fn parse_value(s: &str) -> toml::Value {
    let doc = format!("v = {s}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key v present"),
        Err(_) => toml::Value::String(s.to_string()),
    }
}

fn validate(raw: RawConfig, base_dir: &Path) -> Result<RunConfig> {
    let RawMachine { omega0, omega_l, rabi } = raw.machine;
    positive("machine.omega0", omega0)?;
    positive("machine.omega_l", omega_l)?;
    if !(rabi >= 0.0 && rabi.is_finite()) {
        return Err(Error::config("machine.Omega", format!("must be >= 0, got {rabi}")));
    }
    let cold = bath("cold", BathLabel::Cold, raw.cold)?;
    let hot = bath("hot", BathLabel::Hot, raw.hot)?;
    let machine = MachineParams::new(omega0, omega_l, rabi, cold, hot).map_err(|e| Error::config("machine", e.to_string()))?;

    let mut numerics = Numerics::for_omega0(omega0);
    let n = raw.numerics;
    if let Some(v) = n.broadening_eta {
        positive("numerics.broadening_eta", v)?;
        numerics.broadening_eta = v;
    }
    if let Some(v) = n.bessel_tol {
        positive("numerics.bessel_tol", v)?;
        numerics.bessel_tol = v;
    }
    if let Some(v) = n.max_harmonics {
        if v == 0 {
            return Err(Error::config("numerics.max_harmonics", "must be at least 1"));
        }
        numerics.max_harmonics = v;
    }
    if let Some(v) = n.rank_tol {
        positive("numerics.rank_tol", v)?;
        numerics.rank_tol = v;
    }
    if let Some(v) = n.weight_floor {
        positive("numerics.weight_floor", v)?;
        numerics.weight_floor = v;
    }
    if let Some(v) = n.merge_tol {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::config("numerics.merge_tol", format!("must be >= 0, got {v}")));
        }
        numerics.merge_tol = v;
    }

    let sweep = raw.sweep.map(|s| validate_sweep(s, &machine)).transpose()?;

    let out = raw.output;
    let columns = match out.columns {
        Some(cols) => {
            for c in &cols {
                if !COLUMNS.contains(&c.as_str()) {
                    return Err(Error::config(
                        "output.columns",
                        format!("unknown column `{c}`; known: {}", COLUMNS.join(", ")),
                    ));
                }
            }
            if cols.is_empty() {
                return Err(Error::config("output.columns", "must not be empty"));
            }
            cols
        }
        None => COLUMNS.iter().map(|s| s.to_string()).collect(),
    };
    let svg_column = out.svg_column.unwrap_or_else(|| "P".to_string());
    if !COLUMNS.contains(&svg_column.as_str()) || svg_column == "regime" || svg_column == "flags" {
        return Err(Error::config("output.svg_column", format!("not a numeric column: `{svg_column}`")));
    }
    let resolve = |p: PathBuf| if p.is_absolute() { p } else { base_dir.join(p) };
    Ok(RunConfig {
        machine,
        numerics,
        sweep,
        output: OutputSpec {
            csv_path: out.csv_path.map(resolve),
            svg_path: out.svg_path.map(resolve),
            svg_column,
            svg_log_y: out.svg_log_y,
            columns,
        },
        check: CheckSpec {
            g1_spectrum: raw.check.g1_spectrum.map(resolve),
        },
    })
}

fn validate_sweep(s: RawSweep, machine: &MachineParams) -> Result<SweepSpec> {
    finite("sweep.from", s.from)?;
    finite("sweep.to", s.to)?;
    if !(s.from < s.to) {
        return Err(Error::config("sweep.from", format!("must be below sweep.to ({} >= {})", s.from, s.to)));
    }
    if s.points < 2 {
        return Err(Error::config("sweep.points", format!("must be at least 2, got {}", s.points)));
    }
    if s.scale == Scale::Log && !(s.from > 0.0) {
        return Err(Error::config("sweep.from", "log scale needs from > 0"));
    }
    let spec = SweepSpec {
        parameter: s.parameter,
        from: s.from,
        to: s.to,
        points: s.points,
        scale: s.scale,
    };
    // endpoints bound the grid, so checking them validates every point
    for v in [spec.from, spec.to] {
        spec.parameter
            .apply(machine, v)
            .map_err(|e| Error::config(format!("sweep ({})", spec.parameter.name()), e.to_string()))?;
    }
    Ok(spec)
}

fn bath(section: &str, label: BathLabel, raw: RawBath) -> Result<BathSpec> {
    let mut modes = Vec::with_capacity(raw.modes.len());
    for (i, m) in raw.modes.into_iter().enumerate() {
        let g = match m.coupling {
            RawCoupling::Real(g) => Complex64::new(g, 0.0),
            RawCoupling::Complex([re, im]) => Complex64::new(re, im),
        };
        modes.push(BathMode::new(m.frequency, g).map_err(|e| Error::config(format!("{section}.modes.{i}"), e.to_string()))?);
    }
    BathSpec::new(label, modes, raw.xi, raw.beta).map_err(|e| Error::config(section, e.to_string()))
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be positive and finite, got {v}")))
    }
}

fn finite(path: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be finite, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const MINIMAL: &str = r#"
[machine]
omega0 = 1
omega_l = 0.6
Omega = 0.05

[cold]
xi = 0.3
beta = 4.0
modes = [{ frequency = 0.4, coupling = 1.0 }]

[hot]
xi = 0.1
beta = 0.5
modes = [{ frequency = 1.0, coupling = [0.6, 0.8] }]
"#;

    fn parse(extra: &str, overrides: &[&str]) -> Result<RunConfig> {
        let o: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
        parse_config(&format!("{MINIMAL}{extra}"), Path::new("/tmp/cfg"), &o)
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let c = parse("", &[]).unwrap();
        assert_eq!(c.numerics, Numerics::for_omega0(1.0));
        assert_relative_eq!(c.machine.hot.modes()[0].coupling_sq(), 1.0, max_relative = 1e-15);
        assert!(c.sweep.is_none());
        assert_eq!(c.output.columns.len(), COLUMNS.len());
        assert_eq!(c.output.svg_column, "P");
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(parse("[numerics]\nfoo = 1\n", &[]), Err(Error::ConfigParse(_))));
        assert!(matches!(parse("", &["machine.bogus=1"]), Err(Error::ConfigParse(_))));
    }

    #[test]
    fn sweep_validation() {
        let ok = "[sweep]\nparameter = \"xi_both\"\nfrom = 0.01\nto = 10\npoints = 5\nscale = \"log\"\n";
        let c = parse(ok, &[]).unwrap();
        let g = c.sweep.unwrap().grid();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[4], 10.0);
        assert_relative_eq!(g[2], 0.31622776601683794, max_relative = 1e-14);
        match parse(ok, &["sweep.points=1"]) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "sweep.points"),
            other => panic!("{other:?}"),
        }
        match parse(ok, &["sweep.from=0"]) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "sweep.from"),
            other => panic!("{other:?}"),
        }
        assert!(parse(ok, &["sweep.from=20"]).is_err());
        assert!(parse(ok, &["sweep.parameter=\"beta_C\"", "sweep.scale=\"linear\"", "sweep.from=-1"]).is_err());
    }

    #[test]
    fn overrides_reach_nested_values() {
        let c = parse("", &["cold.xi=0.75", "hot.modes.0.frequency=1.25", "cold.beta=inf"]).unwrap();
        assert_eq!(c.machine.cold.xi(), 0.75);
        assert_eq!(c.machine.hot.modes()[0].frequency(), 1.25);
        assert!(c.machine.cold.beta().is_infinite());
        assert!(parse("", &["hot.modes.3.frequency=1"]).is_err());
        assert!(parse("", &["novalue"]).is_err());
    }

    #[test]
    fn bare_string_override_and_paths() {
        let c = parse("", &["output.csv_path=out/p.csv", "numerics.broadening_eta=0.001"]).unwrap();
        assert_eq!(c.output.csv_path.unwrap(), PathBuf::from("/tmp/cfg/out/p.csv"));
        assert_eq!(c.numerics.broadening_eta, 0.001);
    }

    #[test]
    fn field_paths_in_validation_errors() {
        match parse("", &["cold.beta=-1"]) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "cold"),
            other => panic!("{other:?}"),
        }
        match parse("", &["machine.omega0=0"]) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "machine.omega0"),
            other => panic!("{other:?}"),
        }
        assert!(parse("[output]\ncolumns = [\"nope\"]\n", &[]).is_err());
    }
}
