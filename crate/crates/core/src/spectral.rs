//! Dense symmetric eigendecomposition, graph Fourier transform, and the two
//! spread functionals.
//!
//! The eigensolver is a cyclic Jacobi rotation scheme (Numerical Recipes
//! §11.1 style). Jacobi is slower than tridiagonalization for large matrices
//! but is unconditionally stable on symmetric input, fully deterministic, and
//! its residuals are easy to certify, which is what the test suite leans on.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::DistanceDiagonal;
use crate::tol::{self, Tolerances};

const MAX_SWEEPS: usize = 64;

/// A unit-norm real signal over the graph nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal(DVector<f64>);

impl Signal {
    /// Validates the Euclidean norm to 1 within the norm tolerance.
    pub fn new(values: DVector<f64>) -> Result<Self> {
        let norm = values.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::invalid_argument(format!(
                "signal norm is {norm}, expected 1"
            )));
        }
        Ok(Self(values))
    }

    /// Delta signal: all mass on one 0-based node.
    pub fn delta(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::invalid_argument(format!(
                "delta index {index} out of range for n = {n}"
            )));
        }
        let mut v = DVector::zeros(n);
        v[index] = 1.0;
        Ok(Self(v))
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 0
    }
}

/// Spectral coefficients of a signal in an orthonormal Laplacian eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients(DVector<f64>);

impl SpectralCoefficients {
    pub fn values(&self) -> &DVector<f64> {
        &self.0
    }
}

/// Ascending eigenvalues paired with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl EigenBasis {
    /// i-th eigenvector column.
    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.eigenvectors.column(i).into_owned()
    }
}

/// Eigendecomposition of a symmetric matrix with default tolerances.
pub fn sym_eig(m: &DMatrix<f64>) -> Result<EigenBasis> {
    sym_eig_with(m, &Tolerances::default())
}

/// Eigendecomposition with explicit tolerances.
///
/// The input must be symmetric within `tols.symmetry`; it is symmetrized by
/// averaging before the solve. Eigenvalues come back ascending; each
/// eigenvector is scaled so its largest-magnitude component (lowest index on
/// ties) is nonnegative.
pub fn sym_eig_with(m: &DMatrix<f64>, tols: &Tolerances) -> Result<EigenBasis> {
    let n = m.nrows();
    if m.ncols() != n || n == 0 {
        return Err(Error::invalid_argument(format!(
            "eigensolver needs a nonempty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let mut max_asym = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            max_asym = max_asym.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if max_asym > tols.symmetry {
        return Err(Error::NonSymmetric {
            max_asymmetry: max_asym,
        });
    }

    let mut a = (m + m.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    jacobi(&mut a, &mut v, &mut d)?;

    // sort ascending, carrying eigenvector columns along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| d[i]));
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        eigenvectors.set_column(new, &v.column(old));
    }

    fix_signs(&mut eigenvectors);
    Ok(EigenBasis {
        eigenvalues,
        eigenvectors,
    })
}

/// Cyclic Jacobi sweeps on the working copy `a`; accumulates rotations in
/// `v` and eigenvalues in `d`. Terminates when the off-diagonal sum reaches
/// exactly zero (small entries are flushed once they stop mattering at
/// machine precision relative to the diagonal).
fn jacobi(a: &mut DMatrix<f64>, v: &mut DMatrix<f64>, d: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    let mut b = d.to_vec();
    let mut z = vec![0.0; n];

    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                off += a[(p, q)].abs();
            }
        }
        if off == 0.0 {
            return Ok(());
        }
        // damp tiny rotations during the first sweeps
        let tresh = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };

        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let g = 100.0 * a[(p, q)].abs();
                if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[(p, q)] = 0.0;
                    continue;
                }
                if a[(p, q)].abs() <= tresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    a[(p, q)] / h
                } else {
                    let theta = 0.5 * h / a[(p, q)];
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * a[(p, q)];
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a[(p, q)] = 0.0;
                let rotate = |m: &mut DMatrix<f64>, i: usize, j: usize, k: usize, l: usize| {
                    let g = m[(i, j)];
                    let h = m[(k, l)];
                    m[(i, j)] = g - s * (h + g * tau);
                    m[(k, l)] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rotate(a, j, p, j, q);
                }
                for j in (p + 1)..q {
                    rotate(a, p, j, j, q);
                }
                for j in (q + 1)..n {
                    rotate(a, p, j, q, j);
                }
                for j in 0..n {
                    rotate(v, j, p, j, q);
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    Err(Error::SolverFailure { sweeps: MAX_SWEEPS })
}

/// Make the largest-magnitude component of each column nonnegative, ties
/// broken by lowest index.
fn fix_signs(vectors: &mut DMatrix<f64>) {
    let (n, cols) = vectors.shape();
    for c in 0..cols {
        let mut best = 0usize;
        let mut best_abs = vectors[(0, c)].abs();
        for r in 1..n {
            let a = vectors[(r, c)].abs();
            if a > best_abs {
                best_abs = a;
                best = r;
            }
        }
        if vectors[(best, c)] < 0.0 {
            for r in 0..n {
                vectors[(r, c)] = -vectors[(r, c)];
            }
        }
    }
}

/// Graph Fourier transform `x̂ = Χᵀ x`.
pub fn gft(x: &Signal, basis: &EigenBasis) -> Result<SpectralCoefficients> {
    if x.len() != basis.eigenvectors.nrows() {
        return Err(Error::invalid_argument(format!(
            "signal length {} does not match basis dimension {}",
            x.len(),
            basis.eigenvectors.nrows()
        )));
    }
    Ok(SpectralCoefficients(basis.eigenvectors.tr_mul(x.values())))
}

/// Inverse transform `x = Χ x̂`.
pub fn inverse_gft(coeffs: &SpectralCoefficients, basis: &EigenBasis) -> Result<Signal> {
    if coeffs.values().len() != basis.eigenvectors.ncols() {
        return Err(Error::invalid_argument(format!(
            "coefficient length {} does not match basis dimension {}",
            coeffs.values().len(),
            basis.eigenvectors.ncols()
        )));
    }
    Signal::new(&basis.eigenvectors * coeffs.values())
}

/// Graph spread `xᵀ P x = Σ p[u] x[u]²`.
pub fn graph_spread(x: &Signal, p: &DistanceDiagonal) -> Result<f64> {
    if x.len() != p.len() {
        return Err(Error::invalid_argument(format!(
            "signal length {} does not match distance diagonal length {}",
            x.len(),
            p.len()
        )));
    }
    Ok(x.values()
        .iter()
        .zip(p.entries().iter())
        .map(|(xi, pi)| pi * xi * xi)
        .sum())
}

/// Spectral spread `xᵀ L x`.
pub fn spectral_spread(x: &Signal, l: &DMatrix<f64>) -> Result<f64> {
    if x.len() != l.nrows() || l.nrows() != l.ncols() {
        return Err(Error::invalid_argument(format!(
            "signal length {} does not match Laplacian dimension {}x{}",
            x.len(),
            l.nrows(),
            l.ncols()
        )));
    }
    Ok(quadratic_form(x.values(), l))
}

/// Row-major CSV dump of a matrix at full precision, for debugging.
pub fn matrix_to_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:.16e}", m[(i, j)]))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// CSV dump of a vector (one row), for debugging.
pub fn vector_to_csv(v: &DVector<f64>) -> String {
    let row: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
    let mut out = row.join(",");
    out.push('\n');
    out
}

/// `vᵀ m v` without intermediate allocation.
pub(crate) fn quadratic_form(v: &DVector<f64>, m: &DMatrix<f64>) -> f64 {
    let n = v.len();
    let mut acc = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += m[(i, j)] * v[j];
        }
        acc += v[i] * row;
    }
    acc
}
