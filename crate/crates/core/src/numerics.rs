//! Numerical tolerances shared by the spectral, thermometry and solver stages.

/// Default Lorentzian half-width, in units of the TLS frequency.
pub const DEFAULT_ETA: f64 = 1e-2;
pub const DEFAULT_BESSEL_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_HARMONICS: usize = 400;
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
pub const DEFAULT_WEIGHT_FLOOR: f64 = 1e-14;
/// Relative line-merge tolerance, in units of the TLS frequency.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

/// Lines lighter than this fraction of the heaviest line are dropped from
/// harmonic series and convolutions. Kept well below `weight_floor` so that
/// a retained line never loses its detailed-balance partner to pruning.
pub const PRUNE_REL: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    pub broadening_eta: f64,
    pub bessel_tol: f64,
    pub max_harmonics: usize,
    pub rank_tol: f64,
    pub weight_floor: f64,
    /// Absolute frequency tolerance for merging coincident lines.
    pub merge_tol: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self::for_omega0(1.0)
    }
}

impl Numerics {
    /// Defaults scaled to a TLS frequency `omega0`.
    pub fn for_omega0(omega0: f64) -> Self {
        Self {
            broadening_eta: DEFAULT_ETA * omega0,
            bessel_tol: DEFAULT_BESSEL_TOL,
            max_harmonics: DEFAULT_MAX_HARMONICS,
            rank_tol: DEFAULT_RANK_TOL,
            weight_floor: DEFAULT_WEIGHT_FLOOR,
            merge_tol: DEFAULT_MERGE_TOL * omega0,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.broadening_eta = eta;
        self
    }
}
