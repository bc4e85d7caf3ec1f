//! Uncertainty curves for signals on graphs.
//!
//! A signal living on the nodes of a graph cannot be sharply localized both
//! around a chosen center node and in the spectrum of the normalized
//! Laplacian. This crate computes the trade-off curve between the two
//! localization measures and characterizes the signals that attain it:
//!
//! - [`graph`] — weighted undirected graphs, standard generators, normalized
//!   Laplacian, geodesic distance diagonals.
//! - [`spectral`] — dense symmetric eigendecomposition (cyclic Jacobi), graph
//!   Fourier transform, and the two spread functionals.
//! - [`uncertainty`] — supporting-line extraction from `M(α) = P − αL` and
//!   the sandwich refinement that brackets the curve between certified
//!   piecewise-linear bounds.
//! - [`reduction`] — detection of circulant block structure, the reduced
//!   solution form, hypersphere grid sampling, and Pareto frontiers.
//! - [`io`] — edge-list and JSON graph file formats.

pub mod error;
pub mod graph;
pub mod io;
pub mod reduction;
pub mod spectral;
pub mod tol;
pub mod uncertainty;

pub use error::{Error, Result};
pub use graph::{CenterNode, DistanceDiagonal, DistanceKind, Graph};
pub use spectral::{EigenBasis, Signal, SpectralCoefficients};
pub use uncertainty::{SlopeMatrix, SpreadPoint, UncertaintyCurve};
