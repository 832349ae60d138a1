//! Coupling spectra as exact lists of delta lines.
//!
//! A spectrum `G(ω) = Σ_j w_j δ(ω − ω_j)` is stored line by line. Sum rules
//! and detailed balance are checked on the raw weights; a Lorentzian of
//! half-width `η` is applied only when a rate is needed at a point.

use std::f64::consts::PI;
use std::io::{Read, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub frequency: f64,
    pub weight: f64,
}

impl SpectralLine {
    pub fn new(frequency: f64, weight: f64) -> Self {
        Self { frequency, weight }
    }
}

/// Sorted, merged list of nonnegative spectral lines plus the broadening
/// used for point evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSpectrum {
    lines: Vec<SpectralLine>,
    eta: f64,
}

impl LineSpectrum {
    /// Builds a spectrum from arbitrary lines: sorts them, merges lines closer
    /// than `merge_tol`, and drops zero-weight lines.
    pub fn new(
        lines: impl IntoIterator<Item = SpectralLine>,
        eta: f64,
        merge_tol: f64,
    ) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::Domain(format!("broadening must be positive, got {eta}")));
        }
        let lines: Vec<SpectralLine> = lines.into_iter().collect();
        for l in &lines {
            if !l.frequency.is_finite() || !l.weight.is_finite() || l.weight < 0.0 {
                return Err(Error::Domain(format!(
                    "invalid spectral line ({}, {})",
                    l.frequency, l.weight
                )));
            }
        }
        Ok(Self {
            lines: merge_lines(lines, merge_tol),
            eta,
        })
    }

    pub fn empty(eta: f64) -> Self {
        Self {
            lines: Vec::new(),
            eta,
        }
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        assert!(eta > 0.0, "broadening must be positive");
        self.eta = eta;
        self
    }

    pub fn total_weight(&self) -> f64 {
        self.lines.iter().map(|l| l.weight).sum()
    }

    /// Lorentzian-broadened value `Σ w (η/π) / ((ω − ω_j)² + η²)`.
    pub fn evaluate(&self, omega: f64) -> f64 {
        let eta = self.eta;
        self.lines
            .iter()
            .map(|l| {
                let d = omega - l.frequency;
                l.weight * eta / (PI * (d * d + eta * eta))
            })
            .sum()
    }

    /// Index of the line at `omega` within `tol`, if any.
    pub fn find(&self, omega: f64, tol: f64) -> Option<usize> {
        let idx = self.lines.partition_point(|l| l.frequency < omega - tol);
        self.lines
            .get(idx)
            .filter(|l| (l.frequency - omega).abs() <= tol)
            .map(|_| idx)
    }

    pub fn weight_at(&self, omega: f64, tol: f64) -> Option<f64> {
        self.find(omega, tol).map(|i| self.lines[i].weight)
    }

    /// Writes `frequency,weight` rows under the versioned comment header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut out = out;
        writeln!(out, "# polaron-qhm v1")?;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["frequency", "weight"])?;
        for l in &self.lines {
            w.write_record([format_float(l.frequency), format_float(l.weight)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R, eta: f64, merge_tol: f64) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut lines = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::Domain(format!("spectrum row missing column {i}")))?
                    .parse::<f64>()
                    .map_err(|e| Error::Domain(format!("bad number in spectrum file: {e}")))
            };
            lines.push(SpectralLine::new(parse(0)?, parse(1)?));
        }
        Self::new(lines, eta, merge_tol)
    }
}

/// Broadened point value of a spectrum; always nonnegative.
pub fn evaluate_spectrum(s: &LineSpectrum, omega: f64) -> f64 {
    s.evaluate(omega)
}

/// Sorts lines by frequency and sums the weights of lines whose frequencies
/// lie within `tol` of the first line of their group. The merged frequency is
/// the weight-averaged one. Zero-weight lines are dropped.
pub fn merge_lines(mut lines: Vec<SpectralLine>, tol: f64) -> Vec<SpectralLine> {
    lines.retain(|l| l.weight > 0.0);
    lines.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
    let mut out: Vec<SpectralLine> = Vec::with_capacity(lines.len());
    let mut group_start = f64::NEG_INFINITY;
    let mut moment = 0.0;
    for l in lines {
        match out.last_mut() {
            Some(last) if l.frequency - group_start <= tol => {
                last.weight += l.weight;
                moment += l.weight * l.frequency;
                last.frequency = moment / last.weight;
            }
            _ => {
                group_start = l.frequency;
                moment = l.weight * l.frequency;
                out.push(l);
            }
        }
    }
    out
}

/// Fixed float rendering for every CSV the crate emits: 17 significant
/// digits in scientific notation.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}
