//! Dense complex Hermitian linear algebra used by the ridge solvers:
//! Cholesky factorization with triangular solves, and a cyclic Jacobi
//! eigensolver backing the minimum-norm pseudoinverse branch.

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor of a Hermitian positive-definite matrix.
pub struct CholeskyFactor {
    l: Vec<Complex64>,
    n: usize,
}

/// Factor `G = L L^H`. Fails with `NotPositiveDefinite` when a pivot drops
/// below `n * eps * max(diag)`.
pub fn cholesky(g: &Array2<Complex64>) -> Result<CholeskyFactor> {
    let n = g.nrows();
    assert_eq!(n, g.ncols(), "matrix must be square");
    let mut l: Vec<Complex64> = g.iter().copied().collect();
    let max_diag = (0..n).map(|i| g[[i, i]].re).fold(0.0f64, f64::max);
    let tol = n as f64 * f64::EPSILON * max_diag.max(f64::MIN_POSITIVE);
    for j in 0..n {
        let mut d = l[j * n + j].re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if d <= tol {
            return Err(Error::NotPositiveDefinite { pivot: d, col: j });
        }
        let dj = d.sqrt();
        l[j * n + j] = Complex64::new(dj, 0.0);
        for i in (j + 1)..n {
            let (head, tail) = l.split_at_mut(i * n);
            let row_j = &head[j * n..j * n + j];
            let row_i = &mut tail[..n];
            let mut s = row_i[j];
            for k in 0..j {
                s -= row_i[k] * row_j[k].conj();
            }
            row_i[j] = s / dj;
        }
    }
    Ok(CholeskyFactor { l, n })
}

impl CholeskyFactor {
    /// Solve `L L^H x = b`.
    pub fn solve(&self, b: ArrayView1<'_, Complex64>) -> Array1<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = b.iter().copied().collect();
        // forward: L y = b
        for i in 0..n {
            let mut s = x[i];
            for (lv, xv) in self.l[i * n..i * n + i].iter().zip(&x) {
                s -= lv * xv;
            }
            x[i] = s / self.l[i * n + i].re;
        }
        // backward: L^H x = y
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                let col_below = self.l[(i + 1) * n + i..].iter().step_by(n);
                for (lv, xv) in col_below.zip(&x[i + 1..]) {
                    s -= lv.conj() * xv;
                }
            }
            x[i] = s / self.l[i * n + i].re;
        }
        Array1::from_vec(x)
    }

    /// Cheap condition estimate from the factor diagonal,
    /// `(max_j L_jj / min_j L_jj)^2`. A lower bound on the true 2-norm
    /// condition number, adequate for reporting.
    pub fn cond_estimate(&self) -> f64 {
        let n = self.n;
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for j in 0..n {
            let d = self.l[j * n + j].re;
            lo = lo.min(d);
            hi = hi.max(d);
        }
        (hi / lo).powi(2)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns `(eigenvalues, eigenvectors)` with `G = V diag(w) V^H`.
pub fn hermitian_eigen(g: &Array2<Complex64>) -> (Vec<f64>, Array2<Complex64>) {
    let n = g.nrows();
    assert_eq!(n, g.ncols(), "matrix must be square");
    let mut a = g.clone();
    let mut v = Array2::eye(n);
    if n <= 1 {
        let w = if n == 1 { vec![a[[0, 0]].re] } else { vec![] };
        return (w, v);
    }
    let norm: f64 = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = (norm * 1e-14).max(f64::MIN_POSITIVE);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off += a[[p, q]].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let gpq = a[[p, q]];
                let r = gpq.norm();
                if r <= tol / n as f64 {
                    continue;
                }
                let phase = gpq / r;
                let alpha = a[[p, p]].re;
                let beta = a[[q, q]].re;
                let tau = (beta - alpha) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns p,q: right-multiply by J = [[c, s],[-s e^{-i phi}, c e^{-i phi}]]
                let pe = phase.conj();
                for i in 0..n {
                    let gp = a[[i, p]];
                    let gq = a[[i, q]];
                    a[[i, p]] = gp * c - gq * pe * s;
                    a[[i, q]] = gp * s + gq * pe * c;
                    let vp = v[[i, p]];
                    let vq = v[[i, q]];
                    v[[i, p]] = vp * c - vq * pe * s;
                    v[[i, q]] = vp * s + vq * pe * c;
                }
                // rows p,q: left-multiply by J^H
                let pf = phase;
                for i in 0..n {
                    let gp = a[[p, i]];
                    let gq = a[[q, i]];
                    a[[p, i]] = gp * c - gq * pf * s;
                    a[[q, i]] = gp * s + gq * pf * c;
                }
                a[[p, q]] = Complex64::new(0.0, 0.0);
                a[[q, p]] = Complex64::new(0.0, 0.0);
            }
        }
    }
    let w = (0..n).map(|i| a[[i, i]].re).collect();
    (w, v)
}

/// Minimum-norm solve of the PSD system `G x = b` through the eigendecomposition,
/// dropping eigenvalues below `rank_tol * max(w)`.
pub fn psd_pinv_solve(
    g: &Array2<Complex64>,
    b: ArrayView1<'_, Complex64>,
    rank_tol: f64,
) -> Array1<Complex64> {
    let (w, v) = hermitian_eigen(g);
    let wmax = w.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = wmax * rank_tol;
    let vc = v.mapv(|z| z.conj());
    let mut coeffs = vc.t().dot(&b);
    for (cval, wi) in coeffs.iter_mut().zip(&w) {
        if *wi > cutoff {
            *cval /= *wi;
        } else {
            *cval = Complex64::new(0.0, 0.0);
        }
    }
    v.dot(&coeffs)
}
