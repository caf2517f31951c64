use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rosenau_cli::{run_convergence, run_decay, run_solve, CliError, ConfigFile};

/// Interior-penalty DG solver for the 1D Rosenau equation
/// `u_t + eps*u_xxxxt = f(u)_x` with weakly enforced clamped boundaries and
/// backward-Euler/Newton time stepping.
#[derive(Parser)]
#[command(name = "rosenau", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation; writes snapshots.csv, final_state.csv,
    /// report.json, solution.svg.
    Solve {
        /// JSON problem/run configuration
        config: PathBuf,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Initialize with the L2 projection instead of the elliptic
        /// projection
        #[arg(long)]
        l2_init: bool,
    },
    /// Run a mesh-refinement sweep; writes convergence.csv, report.json.
    Convergence {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the long-time decay experiment (the +u_x advection term is
    /// appended to the configured flux); writes decay.csv, decay.svg,
    /// profiles.svg, report.json.
    Decay {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        l2_init: bool,
    },
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            config,
            out,
            l2_init,
        } => {
            let cfg = ConfigFile::load(&config)?;
            let summary = run_solve(&cfg, &out, l2_init)?;
            println!(
                "solve: {} steps, final |u|_inf = {:.6e}{}",
                summary.newton_iterations.len(),
                summary.final_linf,
                summary
                    .l2_error_vs_exact
                    .map(|e| format!(", L2 error vs exact = {e:.6e}"))
                    .unwrap_or_default()
            );
        }
        Command::Convergence { config, out } => {
            let cfg = ConfigFile::load(&config)?;
            let records = run_convergence(&cfg, &out)?;
            println!("h,l2_error,order");
            for r in &records {
                println!(
                    "{:.6},{:.6e},{}",
                    r.h,
                    r.l2_error,
                    r.order
                        .map(|p| format!("{p:.4}"))
                        .unwrap_or_else(|| "-".into())
                );
            }
        }
        Command::Decay {
            config,
            out,
            l2_init,
        } => {
            let cfg = ConfigFile::load(&config)?;
            let summary = run_decay(&cfg, &out, true, l2_init)?;
            let (t0, l0) = summary.series.first().copied().unwrap_or((0.0, 0.0));
            let (t1, l1) = summary.series.last().copied().unwrap_or((0.0, 0.0));
            println!(
                "decay: linf({t0}) = {l0:.6e} -> linf({t1}) = {l1:.6e}; \
                 fitted log-log slope {:.4} (theory {:.1})",
                summary.fitted_slope, summary.theory_slope
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rosenau: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
