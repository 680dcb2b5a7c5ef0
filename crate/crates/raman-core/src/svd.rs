//! One-sided Jacobi SVD for wide complex matrices.
//!
//! nalgebra's complex SVD returns O(1) reconstruction errors on
//! rank-deficient inputs (a rank-1 3×27 matrix is enough to trigger it),
//! and coupling blocks produce arbitrarily steep singular spectra, so the
//! decomposition here uses Hestenes orthogonalization instead: rotate pairs
//! of columns of Mᴴ until they are mutually orthogonal. The method is
//! deterministic, keeps each singular value accurate relative to its own
//! scale, and degrades gracefully to exact zeros on degenerate input.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// M = left · diag(sigma) · rightᴴ with `sigma` descending, `left` unitary
/// (rows × rows), `right` (cols × rows) with orthonormal columns. A column
/// whose singular value is exactly zero has no information in M; it is
/// filled by a deterministic orthonormal completion so downstream
/// orthonormality invariants hold for every stored mode.
pub(crate) struct JacobiSvd {
    pub sigma: Vec<f64>,
    pub left: DMatrix<C64>,
    pub right: DMatrix<C64>,
}

/// Requires rows ≤ cols (every caller decomposes a wide kernel matrix).
pub(crate) fn jacobi_svd(m: &DMatrix<C64>) -> Result<JacobiSvd> {
    let n = m.nrows();
    let big = m.ncols();
    if n > big {
        return Err(Error::invalid(format!(
            "jacobi_svd expects a wide matrix, got {n}×{big}"
        )));
    }
    // Work on A = Mᴴ (big × n): orthogonalize its columns as A·W = Q·Σ,
    // which yields M = W·Σ·Qᴴ.
    let mut a = m.adjoint();
    let mut w = DMatrix::<C64>::identity(n, n);
    let tol2 = 1e-28;
    let mut converged = false;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for r in 0..big {
                    let ap = a[(r, p)];
                    let aq = a[(r, q)];
                    alpha += ap.norm_sqr();
                    beta += aq.norm_sqr();
                    gamma += ap.conj() * aq;
                }
                if gamma.norm_sqr() <= tol2 * alpha * beta || gamma.norm_sqr() == 0.0 {
                    continue;
                }
                rotated = true;
                // Phase-align the pair so the 2×2 Gram is real symmetric,
                // then apply the classic Rutishauser rotation.
                let g = gamma.norm();
                let phase = (gamma / g).conj();
                let tau = (beta - alpha) / (2.0 * g);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let w01 = C64::new(s, 0.0);
                let w10 = -s * phase;
                let w11 = c * phase;
                for r in 0..big {
                    let ap = a[(r, p)];
                    let aq = a[(r, q)];
                    a[(r, p)] = c * ap + w10 * aq;
                    a[(r, q)] = w01 * ap + w11 * aq;
                }
                for r in 0..n {
                    let wp = w[(r, p)];
                    let wq = w[(r, q)];
                    w[(r, p)] = c * wp + w10 * wq;
                    w[(r, q)] = w01 * wp + w11 * wq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::numerical(
            "one-sided Jacobi SVD did not converge in 60 sweeps".to_string(),
        ));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|k| a.column(k).norm()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));

    let mut sigma = Vec::with_capacity(n);
    let mut left = DMatrix::<C64>::zeros(n, n);
    let mut right = DMatrix::<C64>::zeros(big, n);
    let mut degenerate = Vec::new();
    for (k, &src) in order.iter().enumerate() {
        sigma.push(norms[src]);
        for r in 0..n {
            left[(r, k)] = w[(r, src)];
        }
        if norms[src] > 0.0 {
            for r in 0..big {
                right[(r, k)] = a[(r, src)] / norms[src];
            }
        } else {
            degenerate.push(k);
        }
    }
    // Exact-zero columns carry no direction; complete them from canonical
    // basis vectors by modified Gram-Schmidt against every stored column.
    for k in degenerate {
        let mut placed = false;
        for cand in 0..big {
            let mut v = vec![C64::new(0.0, 0.0); big];
            v[cand] = C64::new(1.0, 0.0);
            for kp in 0..n {
                if kp == k {
                    continue;
                }
                let overlap: C64 = (0..big).map(|r| right[(r, kp)].conj() * v[r]).sum();
                for r in 0..big {
                    let sub = overlap * right[(r, kp)];
                    v[r] -= sub;
                }
            }
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.5 {
                for r in 0..big {
                    right[(r, k)] = v[r] / norm;
                }
                placed = true;
                break;
            }
        }
        debug_assert!(placed, "orthonormal completion exhausted the canonical basis");
    }
    Ok(JacobiSvd { sigma, left, right })
}
