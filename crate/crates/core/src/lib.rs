//! Steady-state thermodynamics of a continuous quantum heat machine whose
//! working fluid is a driven two-level system coupled to two bosonic baths,
//! with the cold coupling treated non-perturbatively through a polaron
//! transformation.
//!
//! The pipeline, bottom to top:
//!
//! * [`bath`]: discrete thermal baths, weak-coupling correlations and spectra.
//! * [`polaron`]: Franck–Condon factor, renormalized Rabi frequency, and the
//!   transformed coupling spectra built from modified-Bessel harmonic series.
//! * [`oracle`]: FFT/DFT reference spectra of sampled correlation functions.
//! * [`kms`]: detailed-balance checks and the frequency-local temperature
//!   `β(ω)` with its bath-mixing fraction `λ(ω)`.
//! * [`floquet`]: dressed basis, Fourier components of the coupling operators,
//!   Lindblad generator assembly and steady state.
//! * [`thermo`]: heat currents, power, efficiency, cooling power, bounds.
//! * [`config`], [`sweep`], [`check`]: run configuration, parameter sweeps with
//!   CSV/SVG output, and the invariant harness behind the CLI.
//!
//! Units: `ħ = k_B = 1`. Frequencies, energies and temperatures are plain
//! reals; an inverse temperature of `f64::INFINITY` means zero temperature.

pub mod bath;
pub mod bessel;
pub mod check;
pub mod config;
pub mod error;
pub mod floquet;
pub mod kms;
pub mod numerics;
pub mod oracle;
pub mod polaron;
pub mod spectrum;
pub mod sweep;
pub mod thermo;

pub use bath::{BathLabel, BathMode, BathSpec};
pub use error::{Error, Result};
pub use floquet::MachineParams;
pub use numerics::Numerics;
pub use spectrum::{LineSpectrum, SpectralLine};
pub use thermo::{Regime, ThermoReport};
