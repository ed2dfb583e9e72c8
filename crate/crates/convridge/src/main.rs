use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

use convridge::harness::{
    emit_csv, emit_svg, preset, run_sweep, verify, SweepSpec, DEFAULT_DELTA_GRID,
    DEFAULT_LAMBDA_GRID,
};
use convridge::signal::{load_config, spectral_density};
use convridge::theory::{predict_mse, DEFAULT_N_QUAD};

/// Convolutional ridge regression: asymptotic error prediction vs
/// Monte-Carlo simulation.
#[derive(Parser)]
#[command(name = "convridge", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Flat key-value config file (see README for the schema).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named preset: iid-paper, ar1-paper, or desk.
    #[arg(long)]
    preset: Option<String>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Trials-per-cell override.
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the asymptotic NMSE prediction over the grid (theory only).
    Predict {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Monte-Carlo simulation only.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Theory and simulation over the grid; writes CSV (and optionally SVG).
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Output directory (default `out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG plot.
        #[arg(long)]
        svg: bool,
    },
    /// Run the cross-module verification suite.
    Verify,
}

fn build_spec(common: &CommonArgs) -> anyhow::Result<SweepSpec> {
    let mut spec = match (&common.config, &common.preset) {
        (Some(path), None) => {
            let rc = load_config(path)?;
            let mut s = SweepSpec::from_run_config(&rc);
            // a config file describes one model; sweeps explore the default grids
            s.delta_grid = DEFAULT_DELTA_GRID.to_vec();
            s.lambda_grid = DEFAULT_LAMBDA_GRID.to_vec();
            if !s.lambda_grid.contains(&rc.model.lambda) {
                s.lambda_grid.push(rc.model.lambda);
            }
            s
        }
        (None, Some(name)) => preset(name)
            .ok_or_else(|| anyhow!("unknown preset `{name}` (try iid-paper, ar1-paper, desk)"))?,
        (Some(_), Some(_)) => return Err(anyhow!("--config and --preset are mutually exclusive")),
        (None, None) => return Err(anyhow!("one of --config or --preset is required")),
    };
    if let Some(seed) = common.seed {
        spec.seed = seed;
    }
    if let Some(trials) = common.trials {
        spec.trials = trials;
    }
    spec.validate()?;
    Ok(spec)
}

fn cmd_predict(common: &CommonArgs) -> anyhow::Result<()> {
    let spec = build_spec(common)?;
    let g = spectral_density(&spec.process);
    println!("{:>10} {:>10} {:>14} {:>14}", "delta", "lambda", "nmse_theory", "log10");
    for &delta_req in &spec.delta_grid {
        let n_x = ((spec.base.n_y as f64 / delta_req).round() as usize).max(1);
        let delta = spec.base.n_y as f64 / n_x as f64;
        for &lambda in &spec.lambda_grid {
            let pred = predict_mse(lambda, delta, spec.base.sigma2, &g, DEFAULT_N_QUAD)?;
            println!(
                "{delta:>10.4} {lambda:>10} {:>14.6e} {:>14.4}",
                pred.nmse,
                pred.nmse.log10()
            );
        }
    }
    Ok(())
}

fn cmd_simulate(common: &CommonArgs) -> anyhow::Result<()> {
    let spec = build_spec(common)?;
    let rows = run_sweep(&spec)?;
    println!(
        "{:>10} {:>10} {:>14} {:>14} {:>7}",
        "delta", "lambda", "nmse_emp_mean", "nmse_emp_std", "trials"
    );
    for r in &rows {
        println!(
            "{:>10.4} {:>10} {:>14.6e} {:>14.6e} {:>7}",
            r.delta, r.lambda, r.nmse_emp_mean, r.nmse_emp_std, r.trials
        );
    }
    Ok(())
}

fn cmd_sweep(common: &CommonArgs, out: &Option<PathBuf>, svg: bool) -> anyhow::Result<()> {
    let spec = build_spec(common)?;
    let rows = run_sweep(&spec)?;
    let dir = out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let csv_path = dir.join("sweep.csv");
    emit_csv(&rows, &csv_path).context("writing CSV")?;
    println!("wrote {}", csv_path.display());
    if svg {
        let svg_path = dir.join("sweep.svg");
        emit_svg(&rows, &svg_path).context("writing SVG")?;
        println!("wrote {}", svg_path.display());
    }
    for r in &rows {
        println!(
            "delta {:>8.4}  lambda {:>8}  theory {:>12.5e}  simulated {:>12.5e} (+/- {:.2e})",
            r.delta, r.lambda, r.nmse_theory, r.nmse_emp_mean, r.nmse_emp_std
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    // die quietly instead of panicking when stdout closes early (`| head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Predict { common } => cmd_predict(common),
        Cmd::Simulate { common } => cmd_simulate(common),
        Cmd::Sweep { common, out, svg } => cmd_sweep(common, out, *svg),
        Cmd::Verify => {
            let report = verify();
            print!("{report}");
            return if report.passed() {
                println!("all checks passed");
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
