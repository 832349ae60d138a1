use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid bath: {0}")]
    InvalidBath(String),

    #[error("invalid machine parameters: {0}")]
    InvalidMachine(String),

    #[error("harmonic series not converged: omitted weight {omitted:.3e} after {cap} harmonics")]
    NonConvergence { omitted: f64, cap: usize },

    #[error("degenerate bath temperatures: lambda undefined (beta_eff = {beta_eff})")]
    DegenerateTemperatures { beta_eff: f64 },

    #[error("no spectral decomposition at frequency {0}")]
    MissingFrequency(f64),

    #[error("steady state not unique: kernel dimension {0}")]
    NonUniqueKernel(usize),

    #[error("no steady state: generator vanishes")]
    NoSteadyState,

    #[error("singular linear system while solving for the steady state")]
    SingularSystem,

    #[error("wrong operating regime: {0}")]
    Regime(String),

    #[error("unphysical bath fraction lambda = {0} for a hot-bath heat input")]
    UnphysicalFraction(f64),

    #[error("both rates vanish")]
    ZeroRates,

    #[error("{path}: {message}")]
    Config { path: String, message: String },

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
