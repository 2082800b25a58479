use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("irregular in-degree: rows {rows:?} differ from the degree {expected} of row 0")]
    IrregularDegree { expected: usize, rows: Vec<usize> },
    #[error("self loop at node {0}")]
    SelfLoop(usize),
    #[error("bad band: {0}")]
    BadBand(String),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no stationary root found in [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },
    #[error("{count} stationary roots {roots:?}; select one with a branch index")]
    AmbiguousBranch { count: usize, roots: Vec<f64> },
    #[error("imaginary residue {residue:e} exceeds tolerance in a spectral sum")]
    RealnessViolation { residue: f64 },
    #[error("analytic covariance needs an exchange-invariant (regular) topology")]
    NonInvariantTopology,
    #[error("in-degree is zero, weight randomness is undefined")]
    ZeroInDegree,
    #[error("degenerate variance ({var_i:e}, {var_j:e})")]
    DegenerateVariance { var_i: f64, var_j: f64 },
    #[error("topology is not fully connected")]
    NotFullyConnected,
    #[error("correlation {c} gives a non positive semidefinite covariance (min eigenvalue {min_eig:e})")]
    NotPSD { c: f64, min_eig: f64 },
    #[error("numerical blowup in trial {trial} at step {step}")]
    NumericalBlowup { trial: usize, step: usize },
    #[error("degenerate moment {moment:e} in higher-order estimator")]
    DegenerateMoment { moment: f64 },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("radius estimate did not stabilize (spread {spread:e})")]
    NonConvergent { spread: f64 },
    #[error("overflow in {0}")]
    Overflow(String),
}

impl Error {
    /// Short variant name, used by the CLI when reporting failures.
    pub fn name(&self) -> &'static str {
        match self {
            Error::IrregularDegree { .. } => "IrregularDegree",
            Error::SelfLoop(_) => "SelfLoop",
            Error::BadBand(_) => "BadBand",
            Error::InvalidTopology(_) => "InvalidTopology",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NoRoot { .. } => "NoRoot",
            Error::AmbiguousBranch { .. } => "AmbiguousBranch",
            Error::RealnessViolation { .. } => "RealnessViolation",
            Error::NonInvariantTopology => "NonInvariantTopology",
            Error::ZeroInDegree => "ZeroInDegree",
            Error::DegenerateVariance { .. } => "DegenerateVariance",
            Error::NotFullyConnected => "NotFullyConnected",
            Error::NotPSD { .. } => "NotPSD",
            Error::NumericalBlowup { .. } => "NumericalBlowup",
            Error::DegenerateMoment { .. } => "DegenerateMoment",
            Error::NoSolution(_) => "NoSolution",
            Error::NonConvergent { .. } => "NonConvergent",
            Error::Overflow(_) => "Overflow",
        }
    }

    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::IrregularDegree { .. }
                | Error::SelfLoop(_)
                | Error::BadBand(_)
                | Error::InvalidTopology(_)
                | Error::InvalidParameter(_)
                | Error::AmbiguousBranch { .. }
                | Error::NonInvariantTopology
                | Error::NotFullyConnected
                | Error::NotPSD { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
