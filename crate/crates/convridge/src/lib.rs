//! Convolutional ridge regression: exact solvers, approximate message
//! passing, and asymptotic error prediction for circular deconvolution.
//!
//! The measurement model is `Y = K * X + Xi` with a known random kernel `K`,
//! a multichannel signal `X` whose rows are i.i.d. draws of a stationary
//! process, and complex normal noise. The library provides
//!
//! - [`dft`]: unitary DFT utilities and the per-frequency transfer form of
//!   the convolution operator,
//! - [`signal`]: model configuration, seeded sampling, the forward map, and
//!   spectral densities `g(omega)`,
//! - [`solvers`]: the per-frequency ridge closed form plus a block-circulant
//!   time-domain oracle,
//! - [`amp`]: approximate message passing with the scalar alpha/lambda
//!   algebra, stability analysis, and state evolution,
//! - [`theory`]: the asymptotic estimation-error predictor (a scalar
//!   integral over frequency of the per-frequency ridge error),
//! - [`harness`]: Monte-Carlo sweeps over `(delta, lambda)` grids with CSV
//!   and SVG emission, presets, and a self-check suite.
//!
//! See the crate examples for end-to-end usage; the `convridge` binary
//! exposes the same flows as `predict`, `simulate`, `sweep`, and `verify`
//! subcommands.

pub mod amp;
pub mod dft;
pub mod error;
pub mod harness;
mod linalg;
pub mod signal;
pub mod solvers;
pub mod theory;

pub use error::{Error, Result};
