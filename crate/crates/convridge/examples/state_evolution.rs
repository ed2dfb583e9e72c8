//! State-evolution traces: geometric convergence of tau_t^2 at rate
//! alpha^2/delta, agreement with the closed-form fixed point, and the
//! divergent regime.
//!
//! ```bash
//! cargo run --release --example state_evolution
//! ```

use convridge::amp::{se_iterate, se_ridge_fixed_point, solve_alpha};

fn main() -> convridge::Result<()> {
    let (lambda, delta, sigma2, sx2) = (0.1, 1.25, 0.1, 1.0);
    let alpha = solve_alpha(lambda, delta)?.alpha_small;
    let fixed = se_ridge_fixed_point(alpha, delta, sigma2, sx2)?;
    println!("lambda = {lambda}, delta = {delta}: alpha = {alpha:.6}, tau*^2 = {fixed:.10}");
    println!("contraction rate alpha^2/delta = {:.6}\n", alpha * alpha / delta);

    let trace = se_iterate(alpha, delta, sigma2, sx2, 0.0, 100, 1e-14);
    println!("{:>4} {:>18} {:>14}", "t", "tau_t^2", "|dev from tau*^2|");
    for (t, tau2) in trace.taus2.iter().enumerate().take(12) {
        println!("{t:>4} {tau2:>18.12} {:>14.3e}", (tau2 - fixed).abs());
    }
    println!(
        "converged = {} after {} iterations, limit {:.12}\n",
        trace.converged, trace.iterations, trace.tau2_fixed
    );

    // alpha^2 >= delta never happens for the stable root, but the recursion
    // itself can be driven there
    let diverging = se_iterate(1.5, 1.0, sigma2, sx2, 0.0, 50, 1e-14);
    println!(
        "alpha = 1.5 at delta = 1: converged = {}, tau_50^2 = {:.3e}",
        diverging.converged,
        diverging.taus2.last().unwrap()
    );
    Ok(())
}
