//! Asymptotic prediction of the ridge estimation error: the per-frequency
//! scalar error `(alpha-1)^2 g + alpha^2 tau^2(g)` integrated over the
//! frequency circle, plus joint-moment predictions used as diagnostics.
//!
//! The integral carries a `1/(2pi)` prefactor so that a constant spectral
//! density collapses the prediction exactly to the single-frequency scalar
//! formula; NMSE divides by the process variance `c_0 = (1/2pi) integral g`
//! evaluated on the same quadrature grid.

use crate::amp::{se_ridge_fixed_point, solve_alpha};
use crate::error::{Error, Result};
use crate::signal::{kahan_mean, SpectralDensity};

pub const DEFAULT_N_QUAD: usize = 4096;

/// Asymptotic error prediction for one `(lambda, delta)` point.
#[derive(Debug, Clone)]
pub struct AsymptoticPrediction {
    /// Smaller root of the alpha/lambda quadratic.
    pub alpha: f64,
    /// Quadrature nodes.
    pub omegas: Vec<f64>,
    /// `tau^2(g(omega))` tabulated on the nodes.
    pub tau2_of_omega: Vec<f64>,
    pub mse: f64,
    pub nmse: f64,
    /// Signal variance used for normalization.
    pub c0: f64,
    pub quadrature_points: usize,
}

/// Per-frequency asymptotic error `(alpha - 1)^2 g + alpha^2 tau^2(g)`.
pub fn pointwise_mse(alpha: f64, delta: f64, sigma2: f64, g_omega: f64) -> Result<f64> {
    let tau2 = se_ridge_fixed_point(alpha, delta, sigma2, g_omega)?;
    Ok((alpha - 1.0) * (alpha - 1.0) * g_omega + alpha * alpha * tau2)
}

/// Integrate the per-frequency error over `[0, 2pi)` with a uniform
/// trapezoid rule (spectrally accurate for the smooth periodic densities
/// supported here).
pub fn predict_mse(
    lambda: f64,
    delta: f64,
    sigma2: f64,
    g: &SpectralDensity,
    n_quad: usize,
) -> Result<AsymptoticPrediction> {
    if n_quad == 0 {
        return Err(Error::BadConfig("quadrature needs at least one point".into()));
    }
    let alpha = solve_alpha(lambda, delta)?.alpha_small;
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut omegas = Vec::with_capacity(n_quad);
    let mut tau2s = Vec::with_capacity(n_quad);
    let mut integrand = Vec::with_capacity(n_quad);
    let mut gs = Vec::with_capacity(n_quad);
    for j in 0..n_quad {
        let omega = two_pi * j as f64 / n_quad as f64;
        let g_omega = g.eval(omega);
        let tau2 = se_ridge_fixed_point(alpha, delta, sigma2, g_omega)?;
        omegas.push(omega);
        tau2s.push(tau2);
        integrand.push((alpha - 1.0) * (alpha - 1.0) * g_omega + alpha * alpha * tau2);
        gs.push(g_omega);
    }
    // periodic trapezoid with the 1/(2pi) prefactor is the plain node mean
    let mse = kahan_mean(integrand.into_iter());
    let c0 = kahan_mean(gs.into_iter());
    if !(c0.is_finite() && c0 > 0.0) {
        return Err(Error::ZeroSignal);
    }
    Ok(AsymptoticPrediction {
        alpha,
        omegas,
        tau2_of_omega: tau2s,
        mse,
        nmse: mse / c0,
        c0,
        quadrature_points: n_quad,
    })
}

/// Predicted second moments of the per-frequency joint law at one frequency:
/// `E[x_hat conj(x0)] = alpha g` and `E|x_hat|^2 = alpha^2 (g + tau^2(g))`.
pub fn predict_joint_moments(
    lambda: f64,
    delta: f64,
    sigma2: f64,
    g_omega: f64,
) -> Result<(f64, f64)> {
    let alpha = solve_alpha(lambda, delta)?.alpha_small;
    let tau2 = se_ridge_fixed_point(alpha, delta, sigma2, g_omega)?;
    Ok((alpha * g_omega, alpha * alpha * (g_omega + tau2)))
}

/// One-dimensional Wasserstein-2 distance between equal-size samples: the
/// sorted (quantile) coupling, `sqrt(mean (a_(i) - b_(i))^2)`.
pub fn empirical_w2_1d(samples_a: &[f64], samples_b: &[f64]) -> Result<f64> {
    if samples_a.len() != samples_b.len() {
        return Err(Error::SampleSizeMismatch(samples_a.len(), samples_b.len()));
    }
    if samples_a.is_empty() {
        return Ok(0.0);
    }
    let mut a = samples_a.to_vec();
    let mut b = samples_b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).expect("samples must not contain NaN"));
    b.sort_by(|x, y| x.partial_cmp(y).expect("samples must not contain NaN"));
    let mean_sq = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / a.len() as f64;
    Ok(mean_sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::substream;
    use rand::Rng;

    const ALPHA_GOLDEN: f64 = 0.3819660112501051;
    const POINTWISE_GOLDEN: f64 = 0.4642956348249516; // alpha + alpha^2 tau^2 at lambda=1, delta=1, sigma2=0.1, g=1
    const SECOND_MOMENT_GOLDEN: f64 = 0.2282276573251619;

    #[test]
    fn pointwise_limits() {
        // full shrinkage (alpha = 0) leaves the signal variance
        assert!((pointwise_mse(0.0, 1.0, 0.3, 0.7).unwrap() - 0.7).abs() < 1e-15);
        // alpha = 1 at delta = 2: only the tau^2 term survives
        let v = pointwise_mse(1.0, 2.0, 0.1, 5.0).unwrap();
        assert!((v - 0.2).abs() < 1e-15);
        // composed golden value
        let v = pointwise_mse(ALPHA_GOLDEN, 1.0, 0.1, 1.0).unwrap();
        assert!((v - POINTWISE_GOLDEN).abs() < 1e-12);
        // diverging domain propagates
        assert!(pointwise_mse(1.5, 1.0, 0.1, 1.0).is_err());
    }

    #[test]
    fn constant_density_collapses_to_scalar_formula() {
        let mut rng = substream(71, &[0]);
        for _ in 0..20 {
            let lambda = 10f64.powf(rng.gen::<f64>() * 4.0 - 3.0);
            let delta = 10f64.powf(rng.gen::<f64>() * 1.6 - 0.8);
            let sigma2 = rng.gen::<f64>() * 2.0;
            let sx2 = rng.gen::<f64>() * 3.0 + 0.01;
            let pred = predict_mse(
                lambda,
                delta,
                sigma2,
                &SpectralDensity::Constant(sx2),
                DEFAULT_N_QUAD,
            )
            .unwrap();
            let alpha = pred.alpha;
            let scalar = (alpha - 1.0) * (alpha - 1.0) * sx2
                + alpha * alpha * se_ridge_fixed_point(alpha, delta, sigma2, sx2).unwrap();
            assert!(
                (pred.mse - scalar).abs() <= 1e-12 * scalar,
                "lambda={lambda} delta={delta}: {} vs {scalar}",
                pred.mse
            );
            assert!((pred.nmse - scalar / sx2).abs() <= 1e-12 * scalar / sx2);
        }
    }

    #[test]
    fn tabulated_constant_matches_closed_constant() {
        let grid = crate::dft::FreqGrid::new(64);
        let tab = SpectralDensity::Tabulated {
            omegas: grid.omegas,
            values: vec![0.37; 64],
        };
        let a = predict_mse(0.3, 1.7, 0.2, &tab, 4096).unwrap();
        let b = predict_mse(0.3, 1.7, 0.2, &SpectralDensity::Constant(0.37), 4096).unwrap();
        assert!((a.mse - b.mse).abs() <= 1e-12 * b.mse);
    }

    #[test]
    fn ar1_prediction_matches_riemann_oracle() {
        let (lambda, delta, sigma2) = (0.1, 2.0, 0.1);
        let g = SpectralDensity::Ar1Closed {
            a: 0.9,
            innovation_var: 0.1,
        };
        let pred = predict_mse(lambda, delta, sigma2, &g, DEFAULT_N_QUAD).unwrap();

        // high-resolution midpoint Riemann sum as the independent oracle
        let n = 1_000_000;
        let alpha = solve_alpha(lambda, delta).unwrap().alpha_small;
        let mut acc = 0.0;
        for j in 0..n {
            let omega = (j as f64 + 0.5) * 2.0 * std::f64::consts::PI / n as f64;
            let gv = g.eval(omega);
            let tau2 = se_ridge_fixed_point(alpha, delta, sigma2, gv).unwrap();
            acc += (alpha - 1.0) * (alpha - 1.0) * gv + alpha * alpha * tau2;
        }
        let oracle = acc / n as f64;
        assert!(
            (pred.mse - oracle).abs() <= 1e-8 * oracle,
            "{} vs {oracle}",
            pred.mse
        );
    }

    #[test]
    fn quadrature_is_converged_at_default_resolution() {
        let g = SpectralDensity::Ar1Closed {
            a: 0.9,
            innovation_var: 0.1,
        };
        let a = predict_mse(0.05, 0.7, 0.2, &g, DEFAULT_N_QUAD).unwrap();
        let b = predict_mse(0.05, 0.7, 0.2, &g, 2 * DEFAULT_N_QUAD).unwrap();
        assert!((a.mse - b.mse).abs() <= 1e-9 * b.mse);
    }

    #[test]
    fn large_lambda_prediction_tends_to_signal_variance() {
        for g in [
            SpectralDensity::Constant(0.004),
            SpectralDensity::Ar1Closed {
                a: 0.9,
                innovation_var: 0.1,
            },
        ] {
            let pred = predict_mse(1e12, 1.5, 0.3, &g, DEFAULT_N_QUAD).unwrap();
            assert!(
                (pred.mse - pred.c0).abs() <= 1e-6 * pred.c0,
                "mse {} vs c0 {}",
                pred.mse,
                pred.c0
            );
            assert!((pred.nmse - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn joint_moment_predictions() {
        // golden composed case
        let (cross, second) = predict_joint_moments(1.0, 1.0, 0.1, 1.0).unwrap();
        assert!((cross - ALPHA_GOLDEN).abs() < 1e-12);
        assert!((second - SECOND_MOMENT_GOLDEN).abs() < 1e-12);

        // ridgeless overdetermined: alpha = 1 exactly, unbiased cross moment
        let (cross, second) = predict_joint_moments(0.0, 4.0, 0.2, 0.7).unwrap();
        assert!((cross - 0.7).abs() < 1e-12);
        let tau2 = se_ridge_fixed_point(1.0, 4.0, 0.2, 0.7).unwrap();
        assert!((second - (0.7 + tau2)).abs() < 1e-12);

        // essentially infinite shrinkage
        let (cross, second) = predict_joint_moments(1e12, 1.0, 0.1, 1.0).unwrap();
        assert!(cross.abs() < 1e-9 && second.abs() < 1e-9);
    }

    #[test]
    fn optimal_lambda_never_beats_trivial_estimator_in_prediction() {
        for (delta, sigma2, g) in [
            (0.5, 1.0, SpectralDensity::Constant(0.004)),
            (2.0, 0.1, SpectralDensity::Constant(1.0)),
            (
                1.25,
                0.1,
                SpectralDensity::Ar1Closed {
                    a: 0.9,
                    innovation_var: 0.1,
                },
            ),
        ] {
            let best = (0..25)
                .map(|i| 10f64.powf(-4.0 + 8.0 * i as f64 / 24.0))
                .map(|lambda| {
                    predict_mse(lambda, delta, sigma2, &g, 512).unwrap().nmse
                })
                .fold(f64::INFINITY, f64::min);
            assert!(best <= 1.0 + 1e-9, "best nmse {best}");
        }
    }

    #[test]
    fn w2_base_cases() {
        assert_eq!(empirical_w2_1d(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(empirical_w2_1d(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 1.0);
        // {0,2} vs {1,3}: brute force over both couplings shows sorted wins
        let sorted_cost = ((0.0f64 - 1.0).powi(2) + (2.0f64 - 3.0).powi(2)) / 2.0;
        let crossed_cost = ((0.0f64 - 3.0).powi(2) + (2.0f64 - 1.0).powi(2)) / 2.0;
        assert!(sorted_cost < crossed_cost);
        let w2 = empirical_w2_1d(&[2.0, 0.0], &[3.0, 1.0]).unwrap();
        assert!((w2 - sorted_cost.sqrt()).abs() < 1e-15);
        assert!((w2 - 1.0).abs() < 1e-15);

        assert!(matches!(
            empirical_w2_1d(&[1.0], &[1.0, 2.0]),
            Err(Error::SampleSizeMismatch(1, 2))
        ));
    }
}
