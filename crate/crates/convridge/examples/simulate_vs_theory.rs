//! Monte-Carlo sweep against the asymptotic prediction at a reduced desk
//! scale, with CSV and SVG written to `out/`.
//!
//! ```bash
//! cargo run --release --example simulate_vs_theory
//! ```

use std::path::Path;

use convridge::harness::{emit_csv, emit_svg, run_sweep, SweepSpec};
use convridge::signal::{ModelConfig, ProcessSpec};

fn main() -> convridge::Result<()> {
    let spec = SweepSpec {
        base: ModelConfig {
            n_x: 100,
            n_y: 100,
            t_len: 64,
            k: 64,
            sigma2: 1.0,
            sigma_k2: 1.0,
            lambda: 0.1,
        },
        delta_grid: vec![0.25, 0.5, 0.8, 1.25, 2.0, 4.0],
        lambda_grid: vec![1e-3, 1e-1, 1.0],
        trials: 8,
        seed: 7,
        process: ProcessSpec::IidComplexGaussian { var: 0.004 },
    };
    let rows = run_sweep(&spec)?;
    println!(
        "{:>8} {:>8} {:>12} {:>12} {:>10} {:>8}",
        "delta", "lambda", "theory", "simulated", "std", "dev %"
    );
    for r in &rows {
        println!(
            "{:>8.3} {:>8} {:>12.4} {:>12.4} {:>10.4} {:>8.3}",
            r.delta,
            r.lambda,
            r.nmse_theory,
            r.nmse_emp_mean,
            r.nmse_emp_std,
            100.0 * (r.nmse_emp_mean - r.nmse_theory).abs() / r.nmse_theory
        );
    }
    emit_csv(&rows, Path::new("out/simulate_vs_theory.csv"))?;
    emit_svg(&rows, Path::new("out/simulate_vs_theory.svg"))?;
    println!("\nwrote out/simulate_vs_theory.csv and out/simulate_vs_theory.svg");
    Ok(())
}
