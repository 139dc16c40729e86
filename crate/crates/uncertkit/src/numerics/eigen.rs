//! Symmetric eigendecomposition via cyclic Jacobi rotations.
//!
//! Jacobi is slower than tridiagonalization + QR for large matrices but is
//! unconditionally reliable for the symmetric case and easy to make
//! bit-reproducible, which matters more here than speed: covariance and
//! scatter matrices in this crate rarely exceed a few dozen rows.

use crate::error::{Error, Result};
use crate::numerics::matrix::{Mat, SymMatrix};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (descending) with paired orthonormal eigenvector columns.
///
/// Column `k` of `eigenvectors` belongs to `eigenvalues[k]`. Each column is
/// normalized and oriented so its largest-magnitude entry is non-negative
/// (ties broken by lowest index), which makes the decomposition unique up to
/// degenerate eigenvalues and keeps downstream projections reproducible.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat,
}

impl EigenDecomposition {
    /// Column `k` as an owned vector.
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.col_vec(k)
    }

    /// First `d` eigenvector columns as an `n x d` matrix.
    pub fn leading_basis(&self, d: usize) -> Mat {
        let n = self.eigenvectors.rows();
        Mat::from_fn(n, d, |i, j| self.eigenvectors.get(i, j))
    }
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Fails with a numeric error if the off-diagonal mass has not vanished
/// after 100 sweeps (which does not happen for finite symmetric input in
/// practice; the cap guards against NaN poisoning).
pub fn sym_eig(m: &SymMatrix) -> Result<EigenDecomposition> {
    let n = m.dim();
    let mut a = m.to_mat();
    let mut v = Mat::identity(n);
    let scale = m.frob_norm().max(1.0);
    let tol = 1e-15 * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).abs();
            }
        }
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = 0.5 * (aqq - app) / apq;
                // Smaller-magnitude root for a stable rotation angle.
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    if !converged {
        return Err(Error::numeric(format!(
            "symmetric eigendecomposition did not converge after {MAX_SWEEPS} sweeps"
        )));
    }

    // Sort descending by eigenvalue; ties keep lower original index first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(j, j)
            .partial_cmp(&a.get(i, i))
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors = Mat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(a.get(src, src));
        let mut col: Vec<f64> = (0..n).map(|i| v.get(i, src)).collect();
        orient_column(&mut col);
        let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (i, x) in col.iter().enumerate() {
            vectors.set(i, dst, x / norm);
        }
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Flip sign so the largest-magnitude entry is non-negative; on magnitude
/// ties the lowest index decides.
fn orient_column(col: &mut [f64]) {
    let mut arg = 0;
    for (i, x) in col.iter().enumerate() {
        if x.abs() > col[arg].abs() {
            arg = i;
        }
    }
    if col[arg] < 0.0 {
        for x in col.iter_mut() {
            *x = -*x;
        }
    }
}

/// Project a symmetric matrix onto the PSD cone by clipping negative
/// eigenvalues at zero and rebuilding. PSD inputs are fixed points.
pub fn nearest_psd(m: &SymMatrix) -> SymMatrix {
    let eig = sym_eig(m).expect("Jacobi converges on finite symmetric input");
    if eig.eigenvalues.iter().all(|&l| l >= 0.0) {
        return m.clone();
    }
    let n = m.dim();
    let v = &eig.eigenvectors;
    let mut rebuilt = Mat::zeros(n, n);
    for k in 0..n {
        let l = eig.eigenvalues[k].max(0.0);
        if l == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = v.get(i, k);
            for j in 0..n {
                rebuilt.set(i, j, rebuilt.get(i, j) + l * vik * v.get(j, k));
            }
        }
    }
    SymMatrix::new(&rebuilt).expect("rebuilt matrix is square and finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rng::Rng;

    fn reconstruct(eig: &EigenDecomposition) -> Mat {
        let n = eig.eigenvalues.len();
        let v = &eig.eigenvectors;
        let mut lam = Mat::zeros(n, n);
        for k in 0..n {
            lam.set(k, k, eig.eigenvalues[k]);
        }
        v.mul(&lam).mul(&v.transpose())
    }

    fn random_symmetric(n: usize, seed: u64) -> SymMatrix {
        let mut rng = Rng::new(seed);
        let m = Mat::from_fn(n, n, |_, _| rng.next_normal());
        SymMatrix::new(&m).unwrap()
    }

    #[test]
    fn diagonal_matrix() {
        let m = SymMatrix::from_diag(&[2.0, 1.0]);
        let eig = sym_eig(&m).unwrap();
        assert_eq!(eig.eigenvalues, vec![2.0, 1.0]);
        assert_eq!(eig.vector(0), vec![1.0, 0.0]);
        assert_eq!(eig.vector(1), vec![0.0, 1.0]);
    }

    #[test]
    fn symmetric_permutation() {
        let m = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let eig = sym_eig(&m).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-12);
        let v0 = eig.vector(0);
        let v1 = eig.vector(1);
        assert!((v0[0] - s).abs() < 1e-12 && (v0[1] - s).abs() < 1e-12);
        // Magnitude tie: entry 0 decides the sign.
        assert!((v1[0] - s).abs() < 1e-12 && (v1[1] + s).abs() < 1e-12);
    }

    #[test]
    fn random_reconstruction_bound() {
        for seed in 0..5 {
            let m = random_symmetric(6, seed);
            let eig = sym_eig(&m).unwrap();
            let err = reconstruct(&eig).sub(&m.to_mat()).frob_norm();
            assert!(err <= 1e-9 * m.frob_norm().max(1.0), "residual {err}");
            // Descending order.
            for k in 1..6 {
                assert!(eig.eigenvalues[k - 1] >= eig.eigenvalues[k]);
            }
        }
    }

    #[test]
    fn eigenvectors_orthonormal() {
        let m = random_symmetric(7, 99);
        let eig = sym_eig(&m).unwrap();
        let vtv = eig.eigenvectors.transpose().mul(&eig.eigenvectors);
        let err = vtv.sub(&Mat::identity(7)).frob_norm();
        assert!(err < 1e-10, "V^T V deviates from I by {err}");
        for k in 0..7 {
            let norm: f64 = eig.vector(k).iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sign_convention_applied() {
        let m = random_symmetric(5, 7);
        let eig = sym_eig(&m).unwrap();
        for k in 0..5 {
            let col = eig.vector(k);
            let mut arg = 0;
            for (i, x) in col.iter().enumerate() {
                if x.abs() > col[arg].abs() {
                    arg = i;
                }
            }
            assert!(col[arg] >= 0.0);
        }
    }

    #[test]
    fn nearest_psd_clips_and_is_idempotent() {
        let m = SymMatrix::from_diag(&[1.0, -0.5]);
        let p = nearest_psd(&m);
        assert!((p.get(0, 0) - 1.0).abs() < 1e-12);
        assert!(p.get(1, 1).abs() < 1e-12);

        let again = nearest_psd(&p);
        let diff = again.to_mat().sub(&p.to_mat()).frob_norm();
        assert!(diff < 1e-12);
    }

    #[test]
    fn nearest_psd_fixes_random_indefinite() {
        for seed in 10..14 {
            let m = random_symmetric(4, seed);
            let p = nearest_psd(&m);
            let eig = sym_eig(&p).unwrap();
            assert!(
                eig.eigenvalues.iter().all(|&l| l >= -1e-12),
                "smallest eigenvalue {:?}",
                eig.eigenvalues.last()
            );
        }
    }

    #[test]
    fn psd_input_unchanged() {
        let m = SymMatrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let p = nearest_psd(&m);
        assert!(p.to_mat().sub(&m.to_mat()).frob_norm() < 1e-12);
    }
}
