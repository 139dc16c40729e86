//! Cholesky factorization for positive semidefinite matrices.
//!
//! Covariances arriving from user data are often singular (duplicated
//! samples, fewer samples than dimensions) or indefinite at rounding level,
//! so the factorization accepts the PSD boundary: zero pivots produce zero
//! columns, and a fixed jitter ladder handles slightly indefinite input.
//! The jitter actually applied is reported, never hidden.

use crate::error::{Error, Result};
use crate::numerics::eigen::sym_eig;
use crate::numerics::matrix::{Mat, SymMatrix};

/// Relative jitter rungs, scaled by `trace(m)/n`.
const JITTER_LADDER: [f64; 4] = [0.0, 1e-12, 1e-10, 1e-8];

/// Lower-triangular factor with the diagonal jitter that was added to make
/// the factorization succeed: `L·Lᵀ = m + jitter·I`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    pub l: Mat,
    pub jitter: f64,
}

/// Factor a PSD matrix, climbing the jitter ladder on failure.
///
/// Each rung is accepted only if the rebuilt product matches `m + jitter·I`
/// within `1e-10·max(1, ‖m‖_F)`. If every rung fails the matrix is
/// indefinite beyond tolerance and the error names its smallest eigenvalue.
pub fn cholesky_psd(m: &SymMatrix) -> Result<CholeskyFactor> {
    let n = m.dim();
    let unit = m.trace() / n as f64;
    let accept = 1e-10 * m.frob_norm().max(1.0);

    for &rung in JITTER_LADDER.iter() {
        let jitter = rung * unit;
        let shifted = m.add_diag(jitter);
        if let Some(l) = factor_semidefinite(&shifted) {
            let residual = l.mul(&l.transpose()).sub(&shifted.to_mat()).frob_norm();
            if residual <= accept {
                if jitter > 0.0 {
                    log::warn!(
                        "cholesky: added jitter {jitter:.3e} to the diagonal to factor a near-indefinite matrix"
                    );
                }
                return Ok(CholeskyFactor { l, jitter });
            }
        }
    }

    let eig = sym_eig(m)?;
    let lambda_min = eig
        .eigenvalues
        .last()
        .copied()
        .expect("dimension is at least 1");
    Err(Error::domain(format!(
        "matrix is not positive semidefinite within tolerance: smallest eigenvalue {lambda_min:.6e}"
    )))
}

/// Strictly positive-definite factorization with the jitter ladder:
/// the factor is guaranteed invertible, so `L⁻¹` solves are safe. Used for
/// density evaluation, where a singular covariance means the density does
/// not exist; that case is a numeric-failure error, not a silent zero.
pub fn cholesky_pd_jittered(m: &SymMatrix) -> Result<CholeskyFactor> {
    let n = m.dim();
    let unit = m.trace() / n as f64;
    let min_pivot = 1e-12 * unit.max(1.0);
    for &rung in JITTER_LADDER.iter() {
        let jitter = rung * unit;
        let shifted = m.add_diag(jitter);
        if let Some(l) = factor_with_pivot_floor(&shifted, min_pivot) {
            if jitter > 0.0 {
                log::warn!(
                    "cholesky: added jitter {jitter:.3e} to keep a covariance invertible"
                );
            }
            return Ok(CholeskyFactor { l, jitter });
        }
    }
    Err(Error::numeric(
        "covariance matrix is singular beyond the jitter ladder; density is undefined".to_string(),
    ))
}

/// Strictly positive-definite factorization, used where the factor must be
/// invertible (density evaluation). No jitter: a singular covariance has no
/// density and the caller should hear about it.
pub fn cholesky_pd(m: &SymMatrix) -> Result<Mat> {
    let n = m.dim();
    let scale = (m.trace() / n as f64).max(1.0);
    let min_pivot = 1e-12 * scale;
    match factor_with_pivot_floor(m, min_pivot) {
        Some(l) => Ok(l),
        None => Err(Error::domain(
            "covariance matrix is singular or degenerate; density is undefined".to_string(),
        )),
    }
}

/// Semidefinite Cholesky: pivots within rounding of zero zero out their
/// column instead of failing. Returns `None` on a pivot that is negative
/// beyond rounding; the caller decides what that means.
fn factor_semidefinite(m: &SymMatrix) -> Option<Mat> {
    let n = m.dim();
    let mut max_diag = 0.0f64;
    for j in 0..n {
        max_diag = max_diag.max(m.get(j, j).abs());
    }
    let pivot_tol = 1e-14 * max_diag.max(1.0);

    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = m.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if d > pivot_tol {
            let ljj = d.sqrt();
            l.set(j, j, ljj);
            for i in (j + 1)..n {
                let mut s = m.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / ljj);
            }
        } else if d >= -pivot_tol {
            // Zero pivot: the rest of the column must be (numerically) zero
            // for a true PSD matrix; the reconstruction check catches lies.
        } else {
            return None;
        }
    }
    Some(l)
}

fn factor_with_pivot_floor(m: &SymMatrix, min_pivot: f64) -> Option<Mat> {
    let n = m.dim();
    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = m.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if d <= min_pivot || !d.is_finite() {
            return None;
        }
        let ljj = d.sqrt();
        l.set(j, j, ljj);
        for i in (j + 1)..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / ljj);
        }
    }
    Some(l)
}

/// Solve `L·y = b` by forward substitution. `L` must have nonzero diagonal.
pub fn solve_lower(l: &Mat, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l.get(i, k) * y[k];
        }
        y[i] = s / l.get(i, i);
    }
    y
}

/// Solve `Lᵀ·x = y` by backward substitution.
pub fn solve_lower_transpose(l: &Mat, y: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l.get(k, i) * x[k];
        }
        x[i] = s / l.get(i, i);
    }
    x
}
