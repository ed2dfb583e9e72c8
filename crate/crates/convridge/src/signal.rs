//! Statistical model of the measurement: configuration, seeded sampling of
//! kernel/noise/signal, the circular forward map, and spectral densities.
//!
//! Sampling conventions
//! --------------------
//! - Complex normal `CN(0, v)` has independent real and imaginary parts of
//!   variance `v/2` each, so `E|Z|^2 = v` and `E[Z^2] = 0`.
//! - Kernel entries are i.i.d. `CN(0, sigma_K^2/(k n_y))`; the `1/k` scaling
//!   is what keeps the per-frequency transfer variance at `sigma_K^2/n_y`
//!   independently of the kernel width.
//! - AR(1) rows are real-valued processes embedded as complex signals with
//!   zero imaginary part; a burn-in long enough to damp correlations below
//!   1e-8 precedes recording.
//! - All generators draw from caller-provided RNG substreams. [`substream`]
//!   derives independent streams from a master seed and a list of ids, so
//!   trials can be generated in any order.

use ndarray::{Array2, Array3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dft::{dft_rows, idft_rows, transfer_of_kernel, FreqGrid};
use crate::error::{Error, Result};

/// Problem dimensions and scalar parameters of one ridge instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub n_x: usize,
    pub n_y: usize,
    pub t_len: usize,
    pub k: usize,
    /// Noise variance `E|Xi|^2`.
    pub sigma2: f64,
    /// Kernel scale; per-entry variance is `sigma_k2 / (k n_y)`.
    pub sigma_k2: f64,
    /// Ridge parameter, `lambda >= 0`.
    pub lambda: f64,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_x == 0 || self.n_y == 0 || self.t_len == 0 || self.k == 0 {
            return Err(Error::BadConfig(
                "dimensions n_x, n_y, T, k must be positive".into(),
            ));
        }
        if self.k > self.t_len {
            return Err(Error::KernelTooWide {
                k: self.k,
                t_len: self.t_len,
            });
        }
        if self.sigma2 < 0.0 {
            return Err(Error::NegativeVariance(self.sigma2));
        }
        if !(self.sigma_k2.is_finite() && self.sigma_k2 > 0.0) {
            return Err(Error::BadConfig(format!(
                "sigmaK2 must be positive, got {}",
                self.sigma_k2
            )));
        }
        if self.lambda < 0.0 {
            return Err(Error::BadConfig(format!(
                "lambda must be nonnegative, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Measurements per unknown, `delta = n_y / n_x`.
    pub fn delta(&self) -> f64 {
        self.n_y as f64 / self.n_x as f64
    }

    /// Kernel width fraction, `beta = k / T`.
    pub fn beta(&self) -> f64 {
        self.k as f64 / self.t_len as f64
    }
}

/// Multichannel input signal; rows are channels, columns are time.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalMatrix {
    pub data: Array2<Complex64>,
}

impl SignalMatrix {
    pub fn n_channels(&self) -> usize {
        self.data.nrows()
    }

    pub fn t_len(&self) -> usize {
        self.data.ncols()
    }
}

/// Convolution kernel, `n_y x n_x x k`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTensor {
    pub data: Array3<Complex64>,
}

impl KernelTensor {
    pub fn dims(&self) -> (usize, usize, usize) {
        let s = self.data.shape();
        (s[0], s[1], s[2])
    }
}

/// Distribution of the innovations driving an AR(1) row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Innovation {
    Gaussian,
    /// Uniform on `{-s, +s}` with `s = sqrt(var)`.
    Rademacher,
}

/// Law of the rows of the signal matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum ProcessSpec {
    IidComplexGaussian { var: f64 },
    Ar1 {
        a: f64,
        innovation_var: f64,
        innovation: Innovation,
    },
}

impl ProcessSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ProcessSpec::IidComplexGaussian { var } => {
                if !(var.is_finite() && var > 0.0) {
                    return Err(Error::BadConfig(format!(
                        "process variance must be positive, got {var}"
                    )));
                }
            }
            ProcessSpec::Ar1 {
                a, innovation_var, ..
            } => {
                if a.abs() >= 1.0 {
                    return Err(Error::UnstableProcess(a));
                }
                if !(innovation_var.is_finite() && innovation_var > 0.0) {
                    return Err(Error::BadConfig(format!(
                        "innovation variance must be positive, got {innovation_var}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Lag-0 autocorrelation of the process.
    pub fn variance(&self) -> f64 {
        match *self {
            ProcessSpec::IidComplexGaussian { var } => var,
            ProcessSpec::Ar1 {
                a, innovation_var, ..
            } => innovation_var / (1.0 - a * a),
        }
    }
}

/// Spectral density `g(omega)`, normalized so that
/// `(1/2pi) integral g = c_0`, the process variance. An i.i.d. process has
/// `g == c_0` exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralDensity {
    Constant(f64),
    Ar1Closed { a: f64, innovation_var: f64 },
    Tabulated { omegas: Vec<f64>, values: Vec<f64> },
}

impl SpectralDensity {
    pub fn eval(&self, omega: f64) -> f64 {
        match self {
            SpectralDensity::Constant(c) => *c,
            SpectralDensity::Ar1Closed { a, innovation_var } => {
                innovation_var / (1.0 - 2.0 * a * omega.cos() + a * a)
            }
            SpectralDensity::Tabulated { omegas, values } => {
                // linear interpolation on the periodic grid
                let n = omegas.len();
                debug_assert!(n >= 1);
                if n == 1 {
                    return values[0];
                }
                let two_pi = 2.0 * std::f64::consts::PI;
                let w = omega.rem_euclid(two_pi);
                let step = two_pi / n as f64;
                let pos = w / step;
                let i = (pos.floor() as usize).min(n - 1);
                let frac = pos - i as f64;
                let next = values[(i + 1) % n];
                values[i] * (1.0 - frac) + next * frac
            }
        }
    }

    /// Process variance `(1/2pi) integral_0^{2pi} g`.
    pub fn c0(&self) -> f64 {
        match self {
            SpectralDensity::Constant(c) => *c,
            SpectralDensity::Ar1Closed { a, innovation_var } => innovation_var / (1.0 - a * a),
            SpectralDensity::Tabulated { values, .. } => {
                kahan_mean(values.iter().copied())
            }
        }
    }
}

pub(crate) fn kahan_mean(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut count = 0usize;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        count += 1;
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derive an independent RNG substream from a master seed and a path of ids
/// (for example `[row_index, trial, role]`). Streams with different paths are
/// statistically independent, so generation order never matters.
pub fn substream(seed: u64, ids: &[u64]) -> ChaCha8Rng {
    let mut acc = mix64(seed ^ 0x6a09e667f3bcc909);
    for &id in ids {
        acc = mix64(acc ^ id.wrapping_add(0x9e3779b97f4a7c15));
    }
    let mut key = [0u8; 32];
    let mut s = acc;
    for chunk in key.chunks_mut(8) {
        s = mix64(s.wrapping_add(0x2545f4914f6cdd1d));
        chunk.copy_from_slice(&s.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

#[inline]
fn cn_unchecked(rng: &mut impl Rng, std_half: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * std_half, im * std_half)
}

/// One draw of `CN(0, variance)`: independent real/imaginary parts with
/// variance `variance/2` each.
pub fn sample_complex_normal(rng: &mut impl Rng, variance: f64) -> Result<Complex64> {
    if variance < 0.0 {
        return Err(Error::NegativeVariance(variance));
    }
    Ok(cn_unchecked(rng, (variance / 2.0).sqrt()))
}

/// Kernel with i.i.d. `CN(0, sigma_K^2/(k n_y))` entries.
pub fn sample_kernel(cfg: &ModelConfig, rng: &mut impl Rng) -> Result<KernelTensor> {
    cfg.validate()?;
    let var = cfg.sigma_k2 / (cfg.k as f64 * cfg.n_y as f64);
    let std_half = (var / 2.0).sqrt();
    let data = Array3::from_shape_simple_fn((cfg.n_y, cfg.n_x, cfg.k), || {
        cn_unchecked(rng, std_half)
    });
    Ok(KernelTensor { data })
}

/// Measurement noise, `n_y x T` with i.i.d. `CN(0, sigma^2)` entries.
pub fn sample_noise(cfg: &ModelConfig, rng: &mut impl Rng) -> Result<Array2<Complex64>> {
    cfg.validate()?;
    let std_half = (cfg.sigma2 / 2.0).sqrt();
    Ok(Array2::from_shape_simple_fn((cfg.n_y, cfg.t_len), || {
        cn_unchecked(rng, std_half)
    }))
}

fn ar1_burn_in(a: f64) -> usize {
    if a == 0.0 {
        0
    } else {
        // damp initial-state correlation below 1e-8
        (1e-8f64.ln() / a.abs().ln()).ceil() as usize
    }
}

/// Signal matrix with independent rows drawn from `spec`.
pub fn sample_signal(
    spec: &ProcessSpec,
    n_x: usize,
    t_len: usize,
    rng: &mut impl Rng,
) -> Result<SignalMatrix> {
    spec.validate()?;
    let data = match *spec {
        ProcessSpec::IidComplexGaussian { var } => {
            let std_half = (var / 2.0).sqrt();
            Array2::from_shape_simple_fn((n_x, t_len), || cn_unchecked(rng, std_half))
        }
        ProcessSpec::Ar1 {
            a,
            innovation_var,
            innovation,
        } => {
            let s = innovation_var.sqrt();
            let burn = ar1_burn_in(a);
            let mut data = Array2::zeros((n_x, t_len));
            for mut row in data.rows_mut() {
                let mut x = 0.0f64;
                for step in 0..burn + t_len {
                    let xi = match innovation {
                        Innovation::Gaussian => {
                            let z: f64 = rng.sample(StandardNormal);
                            z * s
                        }
                        Innovation::Rademacher => {
                            if rng.gen::<bool>() {
                                s
                            } else {
                                -s
                            }
                        }
                    };
                    x = a * x + xi;
                    if step >= burn {
                        row[step - burn] = Complex64::new(x, 0.0);
                    }
                }
            }
            data
        }
    };
    Ok(SignalMatrix { data })
}

/// Circular cross-correlation measurement,
/// `Y_it = sum_j sum_{s<k} K_ijs X_{j,(t+s) mod T}` (noiseless).
///
/// Computed through the per-frequency transfer; the direct triple-loop sum is
/// kept in the tests as the definitional oracle.
pub fn convolve(kernel: &KernelTensor, x: &SignalMatrix) -> Result<Array2<Complex64>> {
    let (_, n_x, k) = kernel.dims();
    if n_x != x.n_channels() {
        return Err(Error::ShapeMismatch(format!(
            "kernel expects {} input channels, signal has {}",
            n_x,
            x.n_channels()
        )));
    }
    if k > x.t_len() {
        return Err(Error::KernelTooWide {
            k,
            t_len: x.t_len(),
        });
    }
    let h = transfer_of_kernel(kernel, x.t_len())?;
    let xf = dft_rows(&x.data);
    Ok(idft_rows(&h.apply(&xf)))
}

/// Noisy measurement `Y = K * X + Xi`.
pub fn forward_model(
    cfg: &ModelConfig,
    kernel: &KernelTensor,
    x: &SignalMatrix,
    rng: &mut impl Rng,
) -> Result<Array2<Complex64>> {
    let mut y = convolve(kernel, x)?;
    if y.nrows() != cfg.n_y || y.ncols() != cfg.t_len {
        return Err(Error::ShapeMismatch(format!(
            "measurement is {}x{}, config expects {}x{}",
            y.nrows(),
            y.ncols(),
            cfg.n_y,
            cfg.t_len
        )));
    }
    y += &sample_noise(cfg, rng)?;
    Ok(y)
}

/// Closed-form spectral density of a process.
pub fn spectral_density(spec: &ProcessSpec) -> SpectralDensity {
    match *spec {
        ProcessSpec::IidComplexGaussian { var } => SpectralDensity::Constant(var),
        ProcessSpec::Ar1 {
            a, innovation_var, ..
        } => SpectralDensity::Ar1Closed { a, innovation_var },
    }
}

/// Tabulated spectrum `mean_i |X_tilde_i(omega_m)|^2` on the signal's own grid.
pub fn empirical_spectrum(x: &SignalMatrix) -> SpectralDensity {
    let xf = dft_rows(&x.data);
    let n = x.n_channels() as f64;
    let grid = FreqGrid::new(x.t_len());
    let values = (0..x.t_len())
        .map(|m| xf.data.column(m).iter().map(|z| z.norm_sqr()).sum::<f64>() / n)
        .collect();
    SpectralDensity::Tabulated {
        omegas: grid.omegas,
        values,
    }
}

/// Full run description read from a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub process: ProcessSpec,
    pub seed: u64,
    pub trials: usize,
}

/// Parse the flat key-value config format. Recognized keys:
/// `n_x, n_y, T, k, sigma2, sigmaK2, lambda, process.kind, process.a,
/// process.var, process.innovation, seed, trials`.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    use std::collections::HashMap;
    let mut kv: HashMap<&str, &str> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::BadConfig(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        const KNOWN: &[&str] = &[
            "n_x",
            "n_y",
            "T",
            "k",
            "sigma2",
            "sigmaK2",
            "lambda",
            "process.kind",
            "process.a",
            "process.var",
            "process.innovation",
            "seed",
            "trials",
        ];
        if !KNOWN.contains(&key) {
            return Err(Error::BadConfig(format!("unknown key `{key}`")));
        }
        if kv.insert(key, value).is_some() {
            return Err(Error::BadConfig(format!("duplicate key `{key}`")));
        }
    }

    fn req<'a>(kv: &HashMap<&str, &'a str>, key: &str) -> Result<&'a str> {
        kv.get(key)
            .copied()
            .ok_or_else(|| Error::BadConfig(format!("missing key `{key}`")))
    }
    fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
        value
            .parse()
            .map_err(|_| Error::BadConfig(format!("key `{key}`: cannot parse `{value}`")))
    }

    let t_len: usize = num("T", req(&kv, "T")?)?;
    let model = ModelConfig {
        n_x: num("n_x", req(&kv, "n_x")?)?,
        n_y: num("n_y", req(&kv, "n_y")?)?,
        t_len,
        k: match kv.get("k") {
            Some(v) => num("k", v)?,
            None => t_len,
        },
        sigma2: num("sigma2", req(&kv, "sigma2")?)?,
        sigma_k2: match kv.get("sigmaK2") {
            Some(v) => num("sigmaK2", v)?,
            None => 1.0,
        },
        lambda: num("lambda", req(&kv, "lambda")?)?,
    };
    model.validate()?;

    let process = match req(&kv, "process.kind")? {
        "iid" => ProcessSpec::IidComplexGaussian {
            var: num("process.var", req(&kv, "process.var")?)?,
        },
        "ar1" => ProcessSpec::Ar1 {
            a: num("process.a", req(&kv, "process.a")?)?,
            innovation_var: num("process.var", req(&kv, "process.var")?)?,
            innovation: match kv.get("process.innovation").copied() {
                None | Some("gaussian") => Innovation::Gaussian,
                Some("rademacher") => Innovation::Rademacher,
                Some(other) => {
                    return Err(Error::BadConfig(format!(
                        "process.innovation must be `gaussian` or `rademacher`, got `{other}`"
                    )))
                }
            },
        },
        other => {
            return Err(Error::BadConfig(format!(
                "process.kind must be `iid` or `ar1`, got `{other}`"
            )))
        }
    };
    process.validate()?;

    Ok(RunConfig {
        model,
        process,
        seed: match kv.get("seed") {
            Some(v) => num("seed", v)?,
            None => 0,
        },
        trials: match kv.get("trials") {
            Some(v) => num("trials", v)?,
            None => 1,
        },
    })
}

/// Read and parse a config file.
pub fn load_config(path: &std::path::Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_config(&text)
}

/// Definitional triple-loop convolution, kept as the oracle the fast
/// transfer-based path is tested against.
#[cfg(test)]
pub(crate) fn naive_convolve(kernel: &KernelTensor, x: &SignalMatrix) -> Array2<Complex64> {
    let (n_y, n_x, k) = kernel.dims();
    let t_len = x.t_len();
    let mut y = Array2::zeros((n_y, t_len));
    for i in 0..n_y {
        for t in 0..t_len {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n_x {
                for s in 0..k {
                    acc += kernel.data[[i, j, s]] * x.data[[j, (t + s) % t_len]];
                }
            }
            y[[i, t]] = acc;
        }
    }
    y
}
