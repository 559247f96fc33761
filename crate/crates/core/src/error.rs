use thiserror::Error;

/// Errors raised anywhere in the simulator.
///
/// Variant names double as the machine-readable error names reported by the
/// command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("InvalidN: chain needs at least 2 sites, got {0}")]
    InvalidN(usize),
    #[error("BadBond: bond {bond} is out of range 1..={max} or repeated")]
    BadBond { bond: usize, max: usize },
    #[error("NegativeAlpha: impurity strength {0} is negative or not finite")]
    NegativeAlpha(f64),
    #[error("ZeroCoupling: exchange coupling must be nonzero and finite")]
    ZeroCoupling,
    #[error("ConvergenceFailure: {0}")]
    ConvergenceFailure(String),
    #[error("NoBracket: lowest energy at alpha={hi} is {energy}, not below the band edge")]
    NoBracket { hi: f64, energy: f64 },
    #[error("TooSmallN: need at least {min} sites, got {n}")]
    TooSmallN { n: usize, min: usize },
    #[error("WrongConfiguration: {0}")]
    WrongConfiguration(String),
    #[error("NotNormalized: squared norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("BadSitePair: ({i}, {j}) for a chain of {n} sites")]
    BadSitePair { i: usize, j: usize, n: usize },
    #[error("BadSite: {site} for a chain of {n} sites")]
    BadSite { site: usize, n: usize },
    #[error("NotDensityMatrix: {0}")]
    NotDensityMatrix(String),
    #[error("NoMinimumInWindow: no local IPR minimum in [{lo}, {hi}]")]
    NoMinimumInWindow { lo: f64, hi: f64 },
    #[error("TooLarge: full-space simulation limited to {max} qubits, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("BadGrid: {0}")]
    BadGrid(String),
    #[error("BadConfig: {0}")]
    BadConfig(String),
}

impl Error {
    /// The bare variant name, e.g. `InvalidN`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidN(_) => "InvalidN",
            Error::BadBond { .. } => "BadBond",
            Error::NegativeAlpha(_) => "NegativeAlpha",
            Error::ZeroCoupling => "ZeroCoupling",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::NoBracket { .. } => "NoBracket",
            Error::TooSmallN { .. } => "TooSmallN",
            Error::WrongConfiguration(_) => "WrongConfiguration",
            Error::NotNormalized(_) => "NotNormalized",
            Error::BadSitePair { .. } => "BadSitePair",
            Error::BadSite { .. } => "BadSite",
            Error::NotDensityMatrix(_) => "NotDensityMatrix",
            Error::NoMinimumInWindow { .. } => "NoMinimumInWindow",
            Error::TooLarge { .. } => "TooLarge",
            Error::BadGrid(_) => "BadGrid",
            Error::BadConfig(_) => "BadConfig",
        }
    }

    /// True for errors caused by an invalid chain specification or input
    /// rather than by a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidN(_)
                | Error::BadBond { .. }
                | Error::NegativeAlpha(_)
                | Error::ZeroCoupling
                | Error::BadGrid(_)
                | Error::BadConfig(_)
                | Error::TooSmallN { .. }
                | Error::TooLarge { .. }
                | Error::WrongConfiguration(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
