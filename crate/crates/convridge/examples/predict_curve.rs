//! Asymptotic double-descent curves, theory only: NMSE against delta for
//! several regularization strengths, for both an i.i.d. signal and an AR(1)
//! signal with strong temporal correlation.
//!
//! ```bash
//! cargo run --release --example predict_curve
//! ```

use convridge::signal::SpectralDensity;
use convridge::theory::{predict_mse, DEFAULT_N_QUAD};

fn main() -> convridge::Result<()> {
    let lambdas = [1e-3, 1e-1, 1.0];
    let cases = [
        ("iid (var 0.004), noise 1.0", SpectralDensity::Constant(0.004), 1.0),
        (
            "AR(1) a=0.9 (var 0.526), noise 0.1",
            SpectralDensity::Ar1Closed {
                a: 0.9,
                innovation_var: 0.1,
            },
            0.1,
        ),
    ];
    for (label, g, sigma2) in cases {
        println!("# {label}");
        print!("{:>8}", "delta");
        for l in lambdas {
            print!(" {:>14}", format!("lambda={l}"));
        }
        println!();
        let mut delta = 0.125f64;
        while delta <= 8.0 + 1e-9 {
            print!("{delta:>8.3}");
            for lambda in lambdas {
                let pred = predict_mse(lambda, delta, sigma2, &g, DEFAULT_N_QUAD)?;
                print!(" {:>14.6}", pred.nmse.log10());
            }
            println!();
            delta *= 2f64.sqrt();
        }
        println!();
    }
    println!("values are log10(NMSE); the weakly regularized peak sits at delta = 1");
    Ok(())
}
