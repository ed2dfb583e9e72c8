//! Unitary DFT utilities and the per-frequency transfer form of the
//! circular convolution operator.
//!
//! The forward transform carries the 1/sqrt(T) factor so that the DFT matrix
//! is unitary: norms are preserved and the inverse is the conjugate scaling.
//! A convolution kernel becomes a family of `n_y x n_x` transfer matrices
//! `H(omega)`, one per grid frequency, satisfying
//! `dft(convolve(K, X)) = H(omega) * dft(X)(omega)` pointwise.
//!
//! Because the measurement operator is a cross-correlation (the kernel is not
//! reflected), the transfer entries are `H_ij(omega) = sum_s K_ijs e^{+i omega s}`,
//! i.e. the positive-exponent transform of the kernel slices.

use std::cell::RefCell;

use ndarray::{Array2, Array3, ArrayView2, Axis};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::signal::KernelTensor;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Uniform frequency grid `omega_m = 2 pi m / T`, `m = 0..T-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqGrid {
    pub t_len: usize,
    pub omegas: Vec<f64>,
}

impl FreqGrid {
    pub fn new(t_len: usize) -> Self {
        assert!(t_len >= 1, "grid needs at least one frequency");
        let omegas = (0..t_len)
            .map(|m| 2.0 * std::f64::consts::PI * m as f64 / t_len as f64)
            .collect();
        FreqGrid { t_len, omegas }
    }
}

/// Row-wise DFT of a multichannel signal; column `m` corresponds to
/// `grid.omegas[m]`.
#[derive(Debug, Clone)]
pub struct FreqSignal {
    pub data: Array2<Complex64>,
    pub grid: FreqGrid,
}

/// The T transfer matrices of a convolution kernel, stored frequency-major
/// so each `n_y x n_x` slice is contiguous.
#[derive(Debug, Clone)]
pub struct FreqTransfer {
    slices: Array3<Complex64>,
    pub grid: FreqGrid,
}

impl FreqTransfer {
    pub fn n_out(&self) -> usize {
        self.slices.shape()[1]
    }

    pub fn n_in(&self) -> usize {
        self.slices.shape()[2]
    }

    /// Transfer matrix at frequency index `m`.
    pub fn slice(&self, m: usize) -> ArrayView2<'_, Complex64> {
        self.slices.index_axis(Axis(0), m)
    }

    /// Apply the transfer pointwise in frequency: `out(omega) = H(omega) x(omega)`.
    pub fn apply(&self, x: &FreqSignal) -> FreqSignal {
        assert_eq!(x.grid.t_len, self.grid.t_len, "frequency grids must match");
        assert_eq!(x.data.nrows(), self.n_in(), "channel count mismatch");
        let mut out = Array2::zeros((self.n_out(), self.grid.t_len));
        for m in 0..self.grid.t_len {
            let h = self.slice(m);
            let xm = x.data.column(m);
            out.column_mut(m).assign(&h.dot(&xm));
        }
        FreqSignal {
            data: out,
            grid: self.grid.clone(),
        }
    }
}

fn run_fft(buf: &mut [Complex64], forward: bool) {
    PLANNER.with(|p| {
        let fft = if forward {
            p.borrow_mut().plan_fft_forward(buf.len())
        } else {
            p.borrow_mut().plan_fft_inverse(buf.len())
        };
        fft.process(buf);
    });
}

/// Unitary forward DFT: `x_tilde(m) = 1/sqrt(T) sum_t x_t e^{-i omega_m t}`.
pub fn dft_forward(x: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x.to_vec();
    run_fft(&mut buf, true);
    let scale = 1.0 / (x.len() as f64).sqrt();
    for v in &mut buf {
        *v *= scale;
    }
    buf
}

/// Inverse of [`dft_forward`]; also carries 1/sqrt(T) so the pair is unitary.
pub fn dft_inverse(x_tilde: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x_tilde.to_vec();
    run_fft(&mut buf, false);
    let scale = 1.0 / (x_tilde.len() as f64).sqrt();
    for v in &mut buf {
        *v *= scale;
    }
    buf
}

fn transform_rows(x: &Array2<Complex64>, forward: bool) -> Array2<Complex64> {
    let t_len = x.ncols();
    let mut out = x.clone();
    let scale = 1.0 / (t_len as f64).sqrt();
    for mut row in out.rows_mut() {
        let buf = row.as_slice_mut().expect("rows of a standard-layout array");
        run_fft(buf, forward);
        for v in buf {
            *v *= scale;
        }
    }
    out
}

/// Row-wise unitary DFT of an `n x T` matrix.
pub fn dft_rows(x: &Array2<Complex64>) -> FreqSignal {
    FreqSignal {
        data: transform_rows(x, true),
        grid: FreqGrid::new(x.ncols()),
    }
}

/// Row-wise inverse of [`dft_rows`].
pub fn idft_rows(x: &FreqSignal) -> Array2<Complex64> {
    transform_rows(&x.data, false)
}

/// Per-frequency transfer matrices of a kernel, consistent with
/// [`crate::signal::convolve`]: `H_ij(omega) = sum_{s<k} K_ijs e^{+i omega s}`.
///
/// The positive exponent makes this the unnormalized inverse FFT of the
/// zero-padded kernel slice, which is what the cross-correlation form of the
/// measurement demands.
pub fn transfer_of_kernel(kernel: &KernelTensor, t_len: usize) -> Result<FreqTransfer> {
    let (n_y, n_x, k) = kernel.dims();
    if k > t_len {
        return Err(Error::KernelTooWide { k, t_len });
    }
    let mut slices = Array3::zeros((t_len, n_y, n_x));
    let out = slices.as_slice_mut().expect("freshly allocated array");

    // Tile over j so the frequency-major scatter writes stay in short
    // contiguous runs instead of one cache line per element.
    const TILE: usize = 32;
    let mut scratch = vec![Complex64::new(0.0, 0.0); TILE * t_len];
    for i in 0..n_y {
        let mut j0 = 0;
        while j0 < n_x {
            let jw = TILE.min(n_x - j0);
            for (jj, row) in scratch.chunks_mut(t_len).enumerate().take(jw) {
                row.fill(Complex64::new(0.0, 0.0));
                for (s, slot) in row.iter_mut().enumerate().take(k) {
                    *slot = kernel.data[[i, j0 + jj, s]];
                }
                run_fft(row, false);
            }
            for m in 0..t_len {
                let base = m * n_y * n_x + i * n_x + j0;
                for jj in 0..jw {
                    out[base + jj] = scratch[jj * t_len + m];
                }
            }
            j0 += jw;
        }
    }
    Ok(FreqTransfer {
        slices,
        grid: FreqGrid::new(t_len),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array3;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// O(T^2) double-loop DFT used as the independent oracle.
    fn naive_dft(x: &[Complex64], forward: bool) -> Vec<Complex64> {
        let t_len = x.len();
        let sign = if forward { -1.0 } else { 1.0 };
        let scale = 1.0 / (t_len as f64).sqrt();
        (0..t_len)
            .map(|m| {
                let mut acc = c(0.0, 0.0);
                for (t, &xt) in x.iter().enumerate() {
                    let ang = sign * 2.0 * std::f64::consts::PI * (m * t) as f64 / t_len as f64;
                    acc += xt * Complex64::from_polar(1.0, ang);
                }
                acc * scale
            })
            .collect()
    }

    fn rand_vec(rng: &mut impl Rng, t_len: usize) -> Vec<Complex64> {
        (0..t_len)
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect()
    }

    fn norm(x: &[Complex64]) -> f64 {
        x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        let diff: f64 = a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        diff / norm(b).max(1e-300)
    }

    #[test]
    fn forward_of_zero_is_zero() {
        let x = vec![c(0.0, 0.0); 7];
        let out = dft_forward(&x);
        assert!(norm(&out) == 0.0);
    }

    #[test]
    fn impulse_becomes_constant() {
        let mut x = vec![c(0.0, 0.0); 4];
        x[0] = c(1.0, 0.0);
        let out = dft_forward(&x);
        for v in &out {
            assert!((v - c(0.5, 0.0)).norm() < 1e-15);
        }
        // and the inverse of the constant 1/sqrt(T) is the impulse
        let back = dft_inverse(&out);
        assert!(rel_err(&back, &x) < 1e-14);
    }

    #[test]
    fn matches_naive_oracle_t8() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = rand_vec(&mut rng, 8);
        let fast = dft_forward(&x);
        let slow = naive_dft(&x, true);
        assert!(rel_err(&fast, &slow) < 1e-12);
        assert!((norm(&fast) - norm(&x)).abs() / norm(&x) < 1e-12);
    }

    #[test]
    fn inverse_matches_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x = rand_vec(&mut rng, 12);
        let fast = dft_inverse(&x);
        let slow = naive_dft(&x, false);
        assert!(rel_err(&fast, &slow) < 1e-12);
    }

    #[test]
    fn round_trip_t16() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let x = rand_vec(&mut rng, 16);
        let back = dft_inverse(&dft_forward(&x));
        assert!(rel_err(&back, &x) < 1e-12);
    }

    fn kernel_from(values: Array3<Complex64>) -> KernelTensor {
        KernelTensor { data: values }
    }

    #[test]
    fn identity_kernel_has_unit_transfer() {
        let k = kernel_from(Array3::from_elem((1, 1, 1), c(1.0, 0.0)));
        let h = transfer_of_kernel(&k, 6).unwrap();
        for m in 0..6 {
            assert!((h.slice(m)[[0, 0]] - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn two_tap_kernel_transfer_closed_form() {
        // K = (1, 1), T = 4: H(omega_m) = 1 + e^{+i omega_m}
        let k = kernel_from(Array3::from_elem((1, 1, 2), c(1.0, 0.0)));
        let h = transfer_of_kernel(&k, 4).unwrap();
        for (m, &omega) in h.grid.omegas.iter().enumerate() {
            let expect = c(1.0, 0.0) + Complex64::from_polar(1.0, omega);
            assert!((h.slice(m)[[0, 0]] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_kernel_wider_than_signal() {
        let k = kernel_from(Array3::from_elem((1, 1, 5), c(1.0, 0.0)));
        assert!(matches!(
            transfer_of_kernel(&k, 4),
            Err(Error::KernelTooWide { k: 5, t_len: 4 })
        ));
    }

    #[test]
    fn grid_frequencies_are_increasing_in_range() {
        let grid = FreqGrid::new(7);
        assert_eq!(grid.omegas.len(), 7);
        for w in grid.omegas.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert_eq!(grid.omegas[0], 0.0);
        assert!(*grid.omegas.last().unwrap() < 2.0 * std::f64::consts::PI);
    }

    #[test]
    fn transfer_consistent_with_time_domain_operator() {
        // dft(convolve(K, X)) = H(omega) dft(X)(omega) against the
        // definitional triple-loop convolution, 20 random signals
        use crate::signal::{naive_convolve, SignalMatrix};
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let (n_y, n_x, k, t_len) = (3, 2, 3, 8);
        let data = Array3::from_shape_fn((n_y, n_x, k), |_| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let kernel = kernel_from(data);
        let h = transfer_of_kernel(&kernel, t_len).unwrap();
        for _ in 0..20 {
            let x = SignalMatrix {
                data: ndarray::Array2::from_shape_fn((n_x, t_len), |_| {
                    c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                }),
            };
            let via_time = dft_rows(&naive_convolve(&kernel, &x));
            let via_freq = h.apply(&dft_rows(&x.data));
            let num: f64 = (&via_time.data - &via_freq.data)
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt();
            let den: f64 = via_freq.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(num / den <= 1e-10, "transfer inconsistency {}", num / den);
        }
    }

    #[test]
    fn transfer_matches_direct_slice_dft() {
        // the FFT fill against the direct e^{+i omega s} sum, entrywise
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let (n_y, n_x, k, t_len) = (3, 2, 3, 8);
        let data = Array3::from_shape_fn((n_y, n_x, k), |_| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let kernel = kernel_from(data);
        let h = transfer_of_kernel(&kernel, t_len).unwrap();
        for (m, &omega) in h.grid.omegas.iter().enumerate() {
            for i in 0..n_y {
                for j in 0..n_x {
                    let mut direct = c(0.0, 0.0);
                    for s in 0..k {
                        direct += kernel.data[[i, j, s]]
                            * Complex64::from_polar(1.0, omega * s as f64);
                    }
                    assert!((h.slice(m)[[i, j]] - direct).norm() < 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn unitary_and_invertible(t_len in 1usize..48, seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = rand_vec(&mut rng, t_len);
            let fwd = dft_forward(&x);
            let nx = norm(&x);
            prop_assert!((norm(&fwd) - nx).abs() <= 1e-12 * nx.max(1.0));
            let back = dft_inverse(&fwd);
            prop_assert!(rel_err(&back, &x) <= 1e-12);
        }
    }
}
