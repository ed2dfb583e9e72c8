//! Approximate message passing: the scalar alpha/lambda algebra, stability
//! analysis, state evolution, and the iterative solver itself (complex,
//! with real systems embedded as zero-imaginary-part complex ones).
//!
//! For the linear denoiser `eta(x) = alpha x` the AMP fixed point is the
//! ridge solution with `lambda = (1 - alpha)(1 - alpha/delta)/alpha`. Given
//! `lambda >= 0` that quadratic has two real positive roots with product
//! `delta`; only the smaller one satisfies the stability condition
//! `|alpha| <= min(1, delta)`, so it is the root all downstream consumers
//! use. The effective noise of the iteration is tracked by the scalar state
//! evolution `tau_{t+1}^2 = sigma^2 + ((1-alpha)^2 sigma_X^2 + alpha^2 tau_t^2)/delta`,
//! an affine contraction with rate `alpha^2/delta`.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Roots of the alpha/lambda quadratic with their stability flags.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSolution {
    pub alpha_small: f64,
    pub alpha_large: f64,
    pub stable_small: bool,
    pub stable_large: bool,
    pub lambda: f64,
    pub delta: f64,
}

/// Both positive roots of `alpha^2 - (1 + delta + lambda delta) alpha + delta = 0`,
/// the rearrangement of `lambda = (1 - alpha)(1 - alpha/delta)/alpha`.
pub fn solve_alpha(lambda: f64, delta: f64) -> Result<AlphaSolution> {
    if lambda < 0.0 {
        return Err(Error::BadConfig(format!(
            "lambda must be nonnegative, got {lambda}"
        )));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::BadConfig(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let b = 1.0 + delta + lambda * delta;
    // discriminant >= (1 - delta)^2 >= 0 for lambda >= 0
    let disc = (b * b - 4.0 * delta).max(0.0);
    let q = b + disc.sqrt();
    let alpha_large = q / 2.0;
    let alpha_small = 2.0 * delta / q;
    Ok(AlphaSolution {
        alpha_small,
        alpha_large,
        stable_small: stability_check(alpha_small, delta),
        stable_large: stability_check(alpha_large, delta),
        lambda,
        delta,
    })
}

/// AMP stability condition for the linear denoiser: `|alpha| <= min(1, delta)`.
pub fn stability_check(alpha: f64, delta: f64) -> bool {
    alpha.abs() <= 1.0f64.min(delta)
}

/// Fixed point of the ridge state evolution,
/// `tau^2 = (sigma^2 + (1-alpha)^2 sigma_x^2 / delta) / (1 - alpha^2/delta)`.
///
/// The `(1-alpha)^2` numerator term is forced by the recursion; requires the
/// contraction condition `alpha^2 < delta`.
pub fn se_ridge_fixed_point(
    alpha: f64,
    delta: f64,
    sigma2: f64,
    sigma_x2: f64,
) -> Result<f64> {
    let alpha2 = alpha * alpha;
    if alpha2 >= delta {
        return Err(Error::DivergentStateEvolution { alpha2, delta });
    }
    Ok((sigma2 + (1.0 - alpha) * (1.0 - alpha) * sigma_x2 / delta) / (1.0 - alpha2 / delta))
}

/// Trace of the state-evolution recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct StateEvolutionTrace {
    /// `tau_t^2` values starting from the initial `tau_0^2`.
    pub taus2: Vec<f64>,
    /// Limit value; `f64::INFINITY` when the recursion diverges.
    pub tau2_fixed: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Iterate the ridge state evolution from `tau0_2`. Divergence
/// (`alpha^2 >= delta`) is reported through `converged`, not an error.
pub fn se_iterate(
    alpha: f64,
    delta: f64,
    sigma2: f64,
    sigma_x2: f64,
    tau0_2: f64,
    t_max: usize,
    tol: f64,
) -> StateEvolutionTrace {
    let mut taus2 = vec![tau0_2];
    let mut tau2 = tau0_2;
    let contracting = alpha * alpha < delta;
    let mut converged = false;
    for _ in 0..t_max {
        let next = sigma2
            + ((1.0 - alpha) * (1.0 - alpha) * sigma_x2 + alpha * alpha * tau2) / delta;
        taus2.push(next);
        let done = contracting && (next - tau2).abs() <= tol * next.abs().max(1.0);
        tau2 = next;
        if done {
            converged = true;
            break;
        }
    }
    StateEvolutionTrace {
        iterations: taus2.len() - 1,
        tau2_fixed: if converged { tau2 } else { f64::INFINITY },
        converged,
        taus2,
    }
}

/// Componentwise denoiser with its Onsager derivative.
///
/// `eta_prime` must be the per-component derivative that makes the Onsager
/// correction exact for the systems the denoiser is meant for: the Wirtinger
/// scalar for genuinely complex maps (`alpha` for the linear denoiser), the
/// plain real derivative for real-signal denoisers run on embedded real
/// systems.
pub trait Denoiser {
    fn eta(&self, r: Complex64, t: usize) -> Complex64;
    fn eta_prime(&self, r: Complex64, t: usize) -> f64;
}

/// `eta(x) = alpha x`; AMP with this denoiser solves ridge regression.
#[derive(Debug, Clone, Copy)]
pub struct LinearDenoiser {
    pub alpha: f64,
}

impl Denoiser for LinearDenoiser {
    fn eta(&self, r: Complex64, _t: usize) -> Complex64 {
        r * self.alpha
    }

    fn eta_prime(&self, _r: Complex64, _t: usize) -> f64 {
        self.alpha
    }
}

/// Real-axis soft threshold with a per-iteration threshold schedule, for
/// real systems embedded as complex. Imaginary parts are mapped to zero.
#[derive(Debug, Clone)]
pub struct SoftThreshold {
    pub thresholds: Vec<f64>,
}

impl SoftThreshold {
    fn theta(&self, t: usize) -> f64 {
        *self
            .thresholds
            .get(t)
            .or(self.thresholds.last())
            .expect("threshold schedule must be nonempty")
    }
}

impl Denoiser for SoftThreshold {
    fn eta(&self, r: Complex64, t: usize) -> Complex64 {
        let th = self.theta(t);
        let v = r.re;
        let out = if v > th {
            v - th
        } else if v < -th {
            v + th
        } else {
            0.0
        };
        Complex64::new(out, 0.0)
    }

    fn eta_prime(&self, r: Complex64, t: usize) -> f64 {
        if r.re.abs() > self.theta(t) {
            1.0
        } else {
            0.0
        }
    }
}

pub const AMP_DEFAULT_TOL: f64 = 1e-10;
pub const AMP_DEFAULT_T_MAX: usize = 2000;

/// History of an AMP run.
#[derive(Debug, Clone)]
pub struct AmpTrace {
    /// `x^1, x^2, ...` in order.
    pub iterates: Vec<Array1<Complex64>>,
    pub x_norms: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Norm blow-up (10x over 50 iterations) or non-finite iterates.
    pub diverged: bool,
    /// `|x - eta(A^H z + x)| / |x|` at the final iterate.
    pub fixed_point_residual: f64,
}

impl AmpTrace {
    pub fn final_x(&self) -> &Array1<Complex64> {
        self.iterates.last().expect("at least one iterate")
    }
}

fn vnorm(v: &Array1<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// General-denoiser AMP:
/// `x^{t+1} = eta_t(A^H z^t + x^t)`,
/// `z^t = y - A x^t + (1/delta) z^{t-1} <eta'_{t-1}>`,
/// from `x^0 = 0`, `z^{-1} = 0`. No damping.
pub fn amp_general(
    a: &Array2<Complex64>,
    y: &Array1<Complex64>,
    denoiser: &dyn Denoiser,
    delta: f64,
    t_max: usize,
) -> AmpTrace {
    amp_run(a, y, denoiser, delta, t_max, AMP_DEFAULT_TOL, 0.0)
}

/// [`amp_general`] with the x-update damped as
/// `x^{t+1} = (1 - damping) eta_t(r^t) + damping x^t`. The fixed point is
/// unchanged; `damping = 0` is the plain recursion.
pub fn amp_general_damped(
    a: &Array2<Complex64>,
    y: &Array1<Complex64>,
    denoiser: &dyn Denoiser,
    delta: f64,
    t_max: usize,
    damping: f64,
) -> AmpTrace {
    amp_run(a, y, denoiser, delta, t_max, AMP_DEFAULT_TOL, damping)
}

fn amp_run(
    a: &Array2<Complex64>,
    y: &Array1<Complex64>,
    denoiser: &dyn Denoiser,
    delta: f64,
    t_max: usize,
    tol: f64,
    damping: f64,
) -> AmpTrace {
    let (n_y, n_x) = a.dim();
    assert_eq!(y.len(), n_y, "measurement length must match matrix rows");
    assert!(delta > 0.0, "delta must be positive");
    assert!((0.0..1.0).contains(&damping), "damping must lie in [0, 1)");
    let ac = a.mapv(|z| z.conj());
    let a_h = ac.t();

    let mut x = Array1::<Complex64>::zeros(n_x);
    let mut z = Array1::<Complex64>::zeros(n_y);
    let mut onsager = 0.0f64;

    let mut iterates = Vec::new();
    let mut x_norms = Vec::new();
    let mut converged = false;
    let mut diverged = false;
    let mut last_t = 0;

    for t in 0..t_max {
        last_t = t;
        // z^t = y - A x^t + (1/delta) z^{t-1} <eta'_{t-1}(r^{t-1})>
        let coeff = onsager / delta;
        z = y - &a.dot(&x) + z.mapv(|v| v * coeff);
        // r^t = A^H z^t + x^t
        let r = &a_h.dot(&z) + &x;
        let x_next = if damping == 0.0 {
            Array1::from_shape_fn(n_x, |i| denoiser.eta(r[i], t))
        } else {
            Array1::from_shape_fn(n_x, |i| {
                denoiser.eta(r[i], t) * (1.0 - damping) + x[i] * damping
            })
        };
        let mut acc = 0.0;
        for i in 0..n_x {
            acc += denoiser.eta_prime(r[i], t);
        }
        onsager = acc / n_x as f64;

        let step = vnorm(&(&x_next - &x));
        let norm = vnorm(&x_next);
        x = x_next;
        iterates.push(x.clone());
        x_norms.push(norm);

        if !norm.is_finite() {
            diverged = true;
            break;
        }
        if x_norms.len() > 50 {
            let old = x_norms[x_norms.len() - 51];
            if old > 0.0 && norm > 10.0 * old {
                diverged = true;
                break;
            }
        }
        if t > 0 && step <= tol * norm.max(1e-300) {
            converged = true;
            break;
        }
    }

    // residual of the fixed-point equation at the final iterate
    let fixed_point_residual = if diverged {
        f64::INFINITY
    } else {
        let r = &a_h.dot(&z) + &x;
        let eta_r = Array1::from_shape_fn(n_x, |i| denoiser.eta(r[i], last_t));
        let num = vnorm(&(&x - &eta_r));
        let den = vnorm(&x);
        if den == 0.0 {
            num
        } else {
            num / den
        }
    };

    AmpTrace {
        iterations: iterates.len(),
        iterates,
        x_norms,
        converged,
        diverged,
        fixed_point_residual,
    }
}

/// Ridge AMP: the general recursion with the linear denoiser
/// `eta(x) = alpha x`. Returns the final iterate and the trace.
pub fn amp_ridge(
    a: &Array2<Complex64>,
    y: &Array1<Complex64>,
    alpha: f64,
    delta: f64,
    t_max: usize,
    tol: f64,
) -> (Array1<Complex64>, AmpTrace) {
    let trace = amp_run(a, y, &LinearDenoiser { alpha }, delta, t_max, tol, 0.0);
    (trace.final_x().clone(), trace)
}
