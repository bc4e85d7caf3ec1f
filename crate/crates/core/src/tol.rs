//! Centralized numerical tolerances.
//!
//! Every threshold used by the library is defined here so that tests and
//! callers share one set of defaults. All values are overridable through
//! [`Tolerances`].

/// Maximum allowed asymmetry `|m[i][j] - m[j][i]|` before a matrix is
/// rejected as non-symmetric. Inputs within this bound are symmetrized by
/// averaging before the eigensolve.
pub const SYMMETRY: f64 = 1e-12;

/// Eigenpair residual bound: `‖m·χ − λ·χ‖ ≤ RESIDUAL · max(1, |λ|)`.
pub const RESIDUAL: f64 = 1e-10;

/// Unit-norm check for signals and orthonormality of eigenbases.
pub const NORM: f64 = 1e-10;

/// Two eigenvalues closer than this are treated as a degenerate pair when
/// extracting the smallest eigenpair of `M(α)`.
pub const EIG_MULTIPLICITY: f64 = 1e-8;

/// Two curve points whose coordinates both differ by less than this are the
/// same point; refinement of the segment between them stops.
pub const DUPLICATE_POINT: f64 = 1e-12;

/// Structural predicates (circulant / constant-by-row) on graphs whose
/// weights are exactly representable integers.
pub const STRUCT_EXACT: f64 = 1e-12;

/// Structural predicates on graphs with general floating-point weights.
pub const STRUCT_FLOAT: f64 = 1e-9;

/// Failed random-graph connectivity draws before giving up.
pub const RANDOM_RETRIES: usize = 1000;

/// Sandwich refinement iteration cap.
pub const SANDWICH_MAX_ITER: usize = 10_000;

/// Largest chord slope magnitude the sandwich refinement will solve at.
/// Near the curve's vertical tangent the slopes grow without bound while
/// the eigenvalue certificate degrades like `n·ε·|α|`; beyond this cap a
/// segment keeps its honestly computed residual gap instead.
pub const SLOPE_CAP: f64 = 1e10;

/// Tolerance set used by the eigensolver and signal constructors.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub symmetry: f64,
    pub residual: f64,
    pub norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symmetry: SYMMETRY,
            residual: RESIDUAL,
            norm: NORM,
        }
    }
}
