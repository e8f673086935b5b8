use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes shared by every analysis in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// `exp(r - x)` would overflow double precision.
    #[error("numeric range exceeded: exp({exponent}) overflows")]
    NumericRange { exponent: f64 },

    #[error("non-finite value {fx} at x = {x}")]
    NotFinite { x: f64, fx: f64 },

    #[error("no sign change on [{a}, {b}] (f(a) = {fa}, f(b) = {fb})")]
    NoSignChange { a: f64, b: f64, fa: f64, fb: f64 },

    #[error("no bracket: {0}")]
    NoBracket(String),

    #[error("outside the domain of the operation: {0}")]
    Domain(String),

    #[error("{x} is not a fixed point (residual {residual:e})")]
    NotAFixedPoint { x: f64, residual: f64 },

    #[error("singular expression: {0}")]
    Singular(String),

    #[error("fixed point z = {z} is not unstable (|f'(z)| = {multiplier})")]
    NotUnstable { z: f64, multiplier: f64 },

    #[error("orbit points coincide at depth {i} and {j}")]
    Tie { i: usize, j: usize },

    #[error("unsupported: {0}")]
    Capability(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by asking for something outside an operation's
    /// mathematical domain (as opposed to a numerical failure).
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::Domain(_)
                | Error::Capability(_)
                | Error::NotAFixedPoint { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
