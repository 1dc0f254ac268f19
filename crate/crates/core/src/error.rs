use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole at {0}")]
    Pole(String),
    #[error("precision exhausted after {retries} retries: relative error {achieved:e} above target {target:e}")]
    PrecisionExhausted { retries: u32, achieved: f64, target: f64 },
    #[error("value indistinguishable from zero at {0}")]
    NearZero(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {requested} bytes requested, budget {budget}")]
    Capacity { requested: u64, budget: u64 },
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("ambiguous winding number {0}")]
    AmbiguousWinding(f64),
    #[error("zero on or near the contour at {0}")]
    ZeroOnContour(String),
    #[error("no sign change on [{0}, {1}]")]
    NoSignChange(f64, f64),
    #[error("inconsistent parameters: {0}")]
    InconsistentParams(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole(_) => "pole",
            Error::PrecisionExhausted { .. } => "precision-exhausted",
            Error::NearZero(_) => "near-zero",
            Error::Domain(_) => "domain",
            Error::Capacity { .. } => "capacity",
            Error::NonConvergence(_) => "non-convergence",
            Error::AmbiguousWinding(_) => "ambiguous",
            Error::ZeroOnContour(_) => "zero-on-contour",
            Error::NoSignChange(..) => "no-sign-change",
            Error::InconsistentParams(_) => "inconsistent-params",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
