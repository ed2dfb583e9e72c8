//! Exact ridge solvers: the per-frequency closed form (production path) and
//! the block-circulant time-domain materialization (small-scale oracle).
//!
//! Per frequency the estimate is
//! `x(omega) = (H(omega)^H H(omega) + lambda I)^{-1} H(omega)^H y(omega)`;
//! when `n_x > n_y` the algebraically identical dual form
//! `H^H (H H^H + lambda I)^{-1} y` keeps the factored matrix at the smaller
//! dimension. At `lambda = 0` the dual form is the minimum-norm interpolant;
//! rank-deficient systems fall back to an eigendecomposition pseudoinverse.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;

use crate::dft::{dft_rows, idft_rows, FreqSignal, FreqTransfer};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, psd_pinv_solve};
use crate::signal::{convolve, KernelTensor, SignalMatrix};

/// Solution of one ridge problem.
#[derive(Debug, Clone)]
pub struct RidgeSolution {
    /// Time-domain estimate, `n_x x T`.
    pub x_hat: Array2<Complex64>,
    /// Frequency-domain estimate; `x_hat` is its row-wise inverse DFT.
    pub x_hat_freq: FreqSignal,
    /// Relative stationarity residual
    /// `|(H^H H + lambda I) x - H^H y| / |H^H y|` per frequency.
    pub per_freq_residual: Vec<f64>,
    /// Condition estimate of the factored system per frequency
    /// (`f64::INFINITY` when the pseudoinverse branch was taken).
    pub cond_estimate: Vec<f64>,
}

fn norm(v: ArrayView1<'_, Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

struct FreqSolve {
    x: Array1<Complex64>,
    rel_residual: f64,
    cond: f64,
}

/// Solve one frequency for one lambda given the precomputed Gram matrix
/// (`H^H H` when primal, `H H^H` when dual).
fn solve_one<'a>(
    h: ArrayView2<'_, Complex64>,
    hc_t: ArrayView2<'_, Complex64>,
    gram: &Array2<Complex64>,
    primal: bool,
    b: &'a Array1<Complex64>,
    y: ArrayView1<'a, Complex64>,
    lambda: f64,
) -> FreqSolve {
    let n = gram.nrows();
    let mut shifted = gram.clone();
    for i in 0..n {
        shifted[[i, i]] += lambda;
    }
    let rhs = if primal { b.view() } else { y };
    let (sol, cond) = match cholesky(&shifted) {
        Ok(f) => (f.solve(rhs), f.cond_estimate()),
        // only reachable at lambda = 0 with a rank-deficient system
        Err(_) => (psd_pinv_solve(gram, rhs, 1e-12), f64::INFINITY),
    };
    let x = if primal { sol } else { hc_t.dot(&sol) };

    // stationarity residual of the primal system, measured for either path
    let w = h.dot(&x);
    let mut r = hc_t.dot(&w) - b;
    if lambda != 0.0 {
        r = r + x.mapv(|v| v * lambda);
    }
    let bn = norm(b.view());
    let rel_residual = if bn == 0.0 { 0.0 } else { norm(r.view()) / bn };
    FreqSolve {
        x,
        rel_residual,
        cond,
    }
}

/// Per-frequency ridge for several lambdas at once, sharing the expensive
/// per-frequency Gram matrices across the grid.
pub fn ridge_freq_multi(
    h: &FreqTransfer,
    y: &Array2<Complex64>,
    lambdas: &[f64],
) -> Result<Vec<RidgeSolution>> {
    let t_len = h.grid.t_len;
    let (n_y, n_x) = (h.n_out(), h.n_in());
    if y.nrows() != n_y || y.ncols() != t_len {
        return Err(Error::ShapeMismatch(format!(
            "measurement is {}x{}, transfer expects {}x{}",
            y.nrows(),
            y.ncols(),
            n_y,
            t_len
        )));
    }
    for &lambda in lambdas {
        if lambda < 0.0 {
            return Err(Error::BadConfig(format!(
                "lambda must be nonnegative, got {lambda}"
            )));
        }
    }
    let yf = dft_rows(y);
    let primal = n_x <= n_y;

    let mut x_freq: Vec<Array2<Complex64>> =
        (0..lambdas.len()).map(|_| Array2::zeros((n_x, t_len))).collect();
    let mut residuals = vec![vec![0.0f64; t_len]; lambdas.len()];
    let mut conds = vec![vec![0.0f64; t_len]; lambdas.len()];

    for m in 0..t_len {
        let hm = h.slice(m);
        let hc = hm.mapv(|z| z.conj());
        let hc_t = hc.t();
        let ym = yf.data.column(m);
        let b = hc_t.dot(&ym);
        let gram = if primal {
            hc_t.dot(&hm)
        } else {
            hm.dot(&hc_t)
        };
        for (li, &lambda) in lambdas.iter().enumerate() {
            let fs = solve_one(hm, hc_t, &gram, primal, &b, ym, lambda);
            x_freq[li].column_mut(m).assign(&fs.x);
            residuals[li][m] = fs.rel_residual;
            conds[li][m] = fs.cond;
        }
    }

    Ok(x_freq
        .into_iter()
        .zip(residuals)
        .zip(conds)
        .map(|((data, per_freq_residual), cond_estimate)| {
            let x_hat_freq = FreqSignal {
                data,
                grid: h.grid.clone(),
            };
            RidgeSolution {
                x_hat: idft_rows(&x_hat_freq),
                x_hat_freq,
                per_freq_residual,
                cond_estimate,
            }
        })
        .collect())
}

/// Per-frequency ridge solve.
pub fn ridge_freq(
    h: &FreqTransfer,
    y: &Array2<Complex64>,
    lambda: f64,
) -> Result<RidgeSolution> {
    Ok(ridge_freq_multi(h, y, &[lambda])?.pop().expect("one solution"))
}

const ORACLE_LIMIT: usize = 4096;

/// Materialize the convolution operator as its doubly block circulant matrix
/// (column by column, by applying the real operator to basis inputs) and
/// solve the ridge normal equations densely. Small-scale oracle only.
pub fn ridge_time_oracle(
    kernel: &KernelTensor,
    y: &Array2<Complex64>,
    lambda: f64,
) -> Result<Array2<Complex64>> {
    let (n_y, n_x, _) = kernel.dims();
    let t_len = y.ncols();
    if y.nrows() != n_y {
        return Err(Error::ShapeMismatch(format!(
            "measurement has {} rows, kernel expects {}",
            y.nrows(),
            n_y
        )));
    }
    if n_x * t_len > ORACLE_LIMIT {
        return Err(Error::OracleScaleExceeded {
            limit: ORACLE_LIMIT,
            actual: n_x * t_len,
        });
    }
    if lambda < 0.0 {
        return Err(Error::BadConfig(format!(
            "lambda must be nonnegative, got {lambda}"
        )));
    }
    let c = materialize_operator(kernel, t_len)?;
    let rows = n_y * t_len;
    let cols = n_x * t_len;
    let mut yv = Array1::zeros(rows);
    for i in 0..n_y {
        for u in 0..t_len {
            yv[i * t_len + u] = y[[i, u]];
        }
    }
    let cc = c.mapv(|z| z.conj());
    let b = cc.t().dot(&yv);

    let x = if lambda == 0.0 && cols > rows {
        // minimum-norm interpolant through the dual system
        let gd = c.dot(&cc.t());
        let u = match cholesky(&gd) {
            Ok(f) => f.solve(yv.view()),
            Err(_) => psd_pinv_solve(&gd, yv.view(), 1e-12),
        };
        cc.t().dot(&u)
    } else {
        let mut g = cc.t().dot(&c);
        for i in 0..cols {
            g[[i, i]] += lambda;
        }
        match cholesky(&g) {
            Ok(f) => f.solve(b.view()),
            Err(_) if lambda == 0.0 => {
                let g0 = cc.t().dot(&c);
                psd_pinv_solve(&g0, b.view(), 1e-12)
            }
            Err(e) => return Err(e),
        }
    };

    let mut out = Array2::zeros((n_x, t_len));
    for j in 0..n_x {
        for t in 0..t_len {
            out[[j, t]] = x[j * t_len + t];
        }
    }
    Ok(out)
}

/// Columns of the operator matrix, obtained by convolving basis signals.
pub(crate) fn materialize_operator(
    kernel: &KernelTensor,
    t_len: usize,
) -> Result<Array2<Complex64>> {
    let (n_y, n_x, _) = kernel.dims();
    let mut c = Array2::zeros((n_y * t_len, n_x * t_len));
    let mut basis = SignalMatrix {
        data: Array2::zeros((n_x, t_len)),
    };
    for j in 0..n_x {
        for t in 0..t_len {
            basis.data[[j, t]] = Complex64::new(1.0, 0.0);
            let col = convolve(kernel, &basis)?;
            basis.data[[j, t]] = Complex64::new(0.0, 0.0);
            for i in 0..n_y {
                for u in 0..t_len {
                    c[[i * t_len + u, j * t_len + t]] = col[[i, u]];
                }
            }
        }
    }
    Ok(c)
}

/// Normalized squared error `|x_hat - x0|_F^2 / |x0|_F^2`.
pub fn nmse(x_hat: &Array2<Complex64>, x0: &Array2<Complex64>) -> Result<f64> {
    if x_hat.dim() != x0.dim() {
        return Err(Error::ShapeMismatch(format!(
            "estimate is {:?}, reference is {:?}",
            x_hat.dim(),
            x0.dim()
        )));
    }
    let den: f64 = x0.iter().map(|z| z.norm_sqr()).sum();
    if den == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let num: f64 = x_hat
        .iter()
        .zip(x0.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dft::transfer_of_kernel;
    use crate::signal::substream;
    use ndarray::Array3;
    use rand::Rng;

    fn rand_c(rng: &mut impl Rng) -> Complex64 {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    }

    fn rand_kernel(rng: &mut impl Rng, n_y: usize, n_x: usize, k: usize) -> KernelTensor {
        KernelTensor {
            data: Array3::from_shape_simple_fn((n_y, n_x, k), || rand_c(rng)),
        }
    }

    fn rand_mat(rng: &mut impl Rng, r: usize, c: usize) -> Array2<Complex64> {
        Array2::from_shape_simple_fn((r, c), || rand_c(rng))
    }

    fn fro(x: &Array2<Complex64>) -> f64 {
        x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn rel_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
        let d: f64 = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        d / fro(b).max(1e-300)
    }

    #[test]
    fn huge_lambda_shrinks_to_zero() {
        let mut rng = substream(41, &[0]);
        let kernel = rand_kernel(&mut rng, 3, 2, 3);
        let y = rand_mat(&mut rng, 3, 8);
        let h = transfer_of_kernel(&kernel, 8).unwrap();
        let sol = ridge_freq(&h, &y, 1e12).unwrap();
        // |x| <= 1e-9 |H^H y|
        let yf = dft_rows(&y);
        let mut bnorm2 = 0.0;
        for m in 0..8 {
            let hc = h.slice(m).mapv(|z| z.conj());
            let b = hc.t().dot(&yf.data.column(m));
            bnorm2 += b.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        assert!(fro(&sol.x_hat) <= 1e-9 * bnorm2.sqrt());
    }

    #[test]
    fn scalar_unit_transfer_halves_measurement() {
        // identity kernel: H(omega) = 1, lambda = 1 -> x = y/2
        let kernel = KernelTensor {
            data: Array3::from_elem((1, 1, 1), Complex64::new(1.0, 0.0)),
        };
        let mut rng = substream(42, &[0]);
        let y = rand_mat(&mut rng, 1, 8);
        let h = transfer_of_kernel(&kernel, 8).unwrap();
        let sol = ridge_freq(&h, &y, 1.0).unwrap();
        let half = y.mapv(|v| v * 0.5);
        assert!(rel_diff(&sol.x_hat, &half) < 1e-12);
    }

    #[test]
    fn freq_and_time_solvers_agree() {
        let mut rng = substream(43, &[0]);
        for &(n_x, n_y, t_len, k, lambda) in &[
            (2usize, 3usize, 8usize, 3usize, 0.1f64),
            (3, 2, 8, 2, 1.0),
            (2, 2, 6, 6, 0.0),
            (3, 2, 5, 4, 0.0),
        ] {
            let kernel = rand_kernel(&mut rng, n_y, n_x, k);
            let y = rand_mat(&mut rng, n_y, t_len);
            let h = transfer_of_kernel(&kernel, t_len).unwrap();
            let fast = ridge_freq(&h, &y, lambda).unwrap();
            let slow = ridge_time_oracle(&kernel, &y, lambda).unwrap();
            let rel = rel_diff(&fast.x_hat, &slow);
            assert!(rel < 1e-8, "case ({n_x},{n_y},{t_len},{k},{lambda}): {rel}");
        }
    }

    #[test]
    fn identity_kernel_noiseless_exact_recovery() {
        let kernel = KernelTensor {
            data: Array3::from_elem((1, 1, 1), Complex64::new(1.0, 0.0)),
        };
        let mut rng = substream(44, &[0]);
        let x0 = rand_mat(&mut rng, 1, 8);
        let x = ridge_time_oracle(&kernel, &x0, 0.0).unwrap();
        assert!(rel_diff(&x, &x0) < 1e-10);
    }

    #[test]
    fn single_channel_operator_is_circulant() {
        let mut rng = substream(45, &[0]);
        let t_len = 6;
        let kernel = rand_kernel(&mut rng, 1, 1, t_len);
        let c = materialize_operator(&kernel, t_len).unwrap();
        for i in 0..t_len {
            for j in 0..t_len {
                let wrapped = c[[(i + 1) % t_len, (j + 1) % t_len]];
                assert!(
                    (c[[i, j]] - wrapped).norm() < 1e-12,
                    "not constant along wrapped diagonals"
                );
            }
        }
    }

    #[test]
    fn oracle_scale_guard() {
        let mut rng = substream(46, &[0]);
        let kernel = rand_kernel(&mut rng, 1, 64, 2);
        let y = rand_mat(&mut rng, 1, 65);
        assert!(matches!(
            ridge_time_oracle(&kernel, &y, 0.1),
            Err(Error::OracleScaleExceeded { .. })
        ));
    }

    #[test]
    fn nmse_trivial_values() {
        let mut rng = substream(47, &[0]);
        let x0 = rand_mat(&mut rng, 2, 4);
        assert_eq!(nmse(&x0, &x0).unwrap(), 0.0);
        let zero = Array2::zeros((2, 4));
        assert!((nmse(&zero, &x0).unwrap() - 1.0).abs() < 1e-15);
        let double = x0.mapv(|v| v * 2.0);
        assert!((nmse(&double, &x0).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(nmse(&zero, &zero), Err(Error::ZeroSignal)));
        let narrow = Array2::zeros((2, 3));
        assert!(matches!(
            nmse(&narrow, &x0),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn parseval_consistency() {
        let mut rng = substream(48, &[0]);
        let kernel = rand_kernel(&mut rng, 3, 2, 3);
        let x0 = rand_mat(&mut rng, 2, 8);
        let y = rand_mat(&mut rng, 3, 8);
        let h = transfer_of_kernel(&kernel, 8).unwrap();
        let sol = ridge_freq(&h, &y, 0.3).unwrap();
        let x0f = dft_rows(&x0);
        let time = nmse(&sol.x_hat, &x0).unwrap();
        let freq = nmse(&sol.x_hat_freq.data, &x0f.data).unwrap();
        assert!((time - freq).abs() <= 1e-10 * time.max(1.0));
    }

    #[test]
    fn solution_minimizes_objective() {
        let mut rng = substream(49, &[0]);
        let kernel = rand_kernel(&mut rng, 3, 2, 3);
        let y = rand_mat(&mut rng, 3, 8);
        let lambda = 0.7;
        let h = transfer_of_kernel(&kernel, 8).unwrap();
        let sol = ridge_freq(&h, &y, lambda).unwrap();

        let objective = |x: &Array2<Complex64>| -> f64 {
            let conv = convolve(&kernel, &SignalMatrix { data: x.clone() }).unwrap();
            let fit: f64 = (&conv - &y).iter().map(|z| z.norm_sqr()).sum();
            fit + lambda * x.iter().map(|z| z.norm_sqr()).sum::<f64>()
        };
        let base = objective(&sol.x_hat);
        let scale = 1e-3 * fro(&sol.x_hat);
        for _ in 0..50 {
            let mut delta = rand_mat(&mut rng, 2, 8);
            let dn = fro(&delta);
            delta.mapv_inplace(|v| v * (scale / dn));
            let perturbed = objective(&(&sol.x_hat + &delta));
            assert!(perturbed >= base - 1e-12 * base.max(1.0));
        }
    }

    #[test]
    fn shrinkage_is_monotone_in_lambda() {
        let mut rng = substream(50, &[0]);
        let kernel = rand_kernel(&mut rng, 3, 2, 4);
        let y = rand_mat(&mut rng, 3, 8);
        let h = transfer_of_kernel(&kernel, 8).unwrap();
        let sols = ridge_freq_multi(&h, &y, &[0.01, 0.1, 1.0, 10.0]).unwrap();
        let norms: Vec<f64> = sols.iter().map(|s| fro(&s.x_hat)).collect();
        for w in norms.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn stationarity_residual_is_small() {
        let mut rng = substream(51, &[0]);
        let kernel = rand_kernel(&mut rng, 3, 2, 3);
        let y = rand_mat(&mut rng, 3, 8);
        let h = transfer_of_kernel(&kernel, 8).unwrap();
        for lambda in [0.0, 0.1, 1.0] {
            let sol = ridge_freq(&h, &y, lambda).unwrap();
            for (m, r) in sol.per_freq_residual.iter().enumerate() {
                assert!(*r <= 1e-8, "lambda={lambda} freq {m}: residual {r}");
            }
        }
    }

    #[test]
    fn ridgeless_underdetermined_is_min_norm_interpolant() {
        let mut rng = substream(52, &[0]);
        let (n_x, n_y, t_len) = (4, 2, 4);
        let kernel = rand_kernel(&mut rng, n_y, n_x, 2);
        let y = rand_mat(&mut rng, n_y, t_len);
        let h = transfer_of_kernel(&kernel, t_len).unwrap();
        let sol = ridge_freq(&h, &y, 0.0).unwrap();
        let yf = dft_rows(&y);
        for m in 0..t_len {
            let hm = h.slice(m);
            let hc = hm.mapv(|z| z.conj());
            let xm = sol.x_hat_freq.data.column(m);
            let ym = yf.data.column(m);
            // interpolation: H x = y exactly
            let fit = &hm.dot(&xm) - &ym;
            let rel = fit.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
                / ym.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(rel < 1e-8, "freq {m}: interpolation residual {rel}");
            // minimality: x is orthogonal to ker(H)
            let z = Array1::from_shape_simple_fn(n_x, || rand_c(&mut rng));
            let gd = hm.dot(&hc.t());
            let u = cholesky(&gd).unwrap().solve(hm.dot(&z).view());
            let v = &z - &hc.t().dot(&u); // kernel-space vector
            let hv = hm.dot(&v);
            assert!(hv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() < 1e-8);
            let inner: Complex64 = xm
                .iter()
                .zip(v.iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let xn = xm.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(inner.norm() <= 1e-8 * xn * vn);
        }
    }

    #[test]
    fn rank_deficient_ridgeless_falls_back_to_pinv() {
        // zero kernel at lambda = 0: minimum-norm solution is zero
        let kernel = KernelTensor {
            data: Array3::zeros((2, 2, 2)),
        };
        let mut rng = substream(53, &[0]);
        let y = rand_mat(&mut rng, 2, 4);
        let h = transfer_of_kernel(&kernel, 4).unwrap();
        let sol = ridge_freq(&h, &y, 0.0).unwrap();
        assert!(fro(&sol.x_hat) == 0.0);
        assert!(sol.cond_estimate.iter().all(|c| c.is_infinite()));
    }
}
