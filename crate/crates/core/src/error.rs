use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Coincident or otherwise degenerate points/parameters.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Argument outside the domain of the function.
    #[error("{what}: argument {value} outside domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A series or iteration failed to converge.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Evaluation too close to a pole of the Weierstrass potential.
    #[error("point {re}+{im}i lies within {dist:e} of a pole")]
    Pole { re: f64, im: f64, dist: f64 },

    /// The accessory parameter left the admissible bracket: a solution of the
    /// Lame equation or its derivative vanished on an integration leg.
    #[error("accessory parameter {lambda} outside admissible bracket: {reason}")]
    Bracket { lambda: f64, reason: String },

    /// Root finding failed to locate a sign change.
    #[error("solver failure at tau={tau}: {reason}")]
    Solver {
        tau: f64,
        reason: String,
        /// `(lambda, residual)` scan samples for diagnostics.
        scan: Vec<(f64, f64)>,
    },

    /// One or more table nodes failed to solve.
    #[error("cross-ratio table build failed at moduli {failed:?}")]
    TableBuild { failed: Vec<f64> },

    /// Requested value outside the supported or tabulated range.
    #[error("{what}: {value} outside range [{lo}, {hi}]")]
    Range {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain { what, value, expected }
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
