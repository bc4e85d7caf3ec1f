//! Error type shared by all modules.

use crate::uncertainty::UncertaintyCurve;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A size precondition failed (e.g. a star graph needs n ≥ 3).
    #[error("invalid size: {0}")]
    InvalidSize(String),

    /// A generic argument precondition failed.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A matrix expected to be symmetric deviated beyond tolerance.
    #[error("matrix is not symmetric: max |m[i][j] - m[j][i]| = {max_asymmetry:e}")]
    NonSymmetric { max_asymmetry: f64 },

    /// A node has zero degree, so `D^{-1/2}` does not exist.
    #[error("degenerate degree: node {node} has no incident positive weight")]
    DegenerateDegree { node: usize },

    /// A node is unreachable from the chosen center.
    #[error("disconnected graph: node {node} is unreachable")]
    Disconnected { node: usize },

    /// The eigensolver did not converge.
    #[error("eigensolver failed to converge after {sweeps} sweeps")]
    SolverFailure { sweeps: usize },

    /// The sandwich refinement hit its iteration cap; the partial curve is
    /// attached so callers can still export it.
    #[error("sandwich refinement exceeded {iterations} iterations (gap {gap:e})")]
    Convergence {
        iterations: usize,
        gap: f64,
        partial: Box<UncertaintyCurve>,
    },

    /// An abscissa fell outside the domain of a curve.
    #[error("abscissa {value} outside curve domain [{min}, {max}]")]
    Domain { value: f64, min: f64, max: f64 },

    /// A graph or data file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
