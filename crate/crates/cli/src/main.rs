use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use ibm_exit_cli::acceptance::Fault;
use ibm_exit_cli::commands;
use ibm_exit_cli::config::{self, ConfigError, Overrides};

#[derive(Parser)]
#[command(name = "ibm-exit", version, about = "Exit-time laws for iterated and Brownian-time processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the asymptotic survival laws for the configured geometry
    Predict {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Tabulate survival probabilities by adaptive quadrature
    Quadrature {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Estimate survival probabilities by exact-inversion Monte Carlo
    Montecarlo {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Track convergence of the computed survival toward its predicted law
    Converge {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the built-in acceptance suite
    Verify {
        /// Write a JSON report here ("-" for stdout)
        #[arg(long)]
        json: Option<PathBuf>,
        /// Multiply the sharp interval constant by this factor (fault injection)
        #[arg(long, default_value_t = 1.0)]
        fault_scale_sharp_constant: f64,
        /// Run a single item (1..=9) and print its detail lines
        #[arg(long)]
        item: Option<u32>,
    },
}

fn init_workers(flag: Option<usize>, cfg_workers: Option<usize>) -> Result<()> {
    let env_workers = match std::env::var("IBM_EXIT_WORKERS") {
        Ok(s) => Some(s.parse::<usize>().map_err(|_| {
            config::invalid(format!("IBM_EXIT_WORKERS must be a positive integer, got {s:?}"))
        })?),
        Err(_) => None,
    };
    let Some(w) = flag.or(cfg_workers).or(env_workers) else {
        return Ok(());
    };
    if w == 0 {
        return Err(config::invalid("worker count must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(w)
        .build_global()
        .map_err(|e| config::invalid(format!("worker pool: {e}")))
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Predict { overrides } => {
            let cfg = config::load(&overrides)?;
            init_workers(overrides.workers, cfg.workers)?;
            commands::cmd_predict(&cfg)?;
        }
        Command::Quadrature { overrides } => {
            let cfg = config::load(&overrides)?;
            init_workers(overrides.workers, cfg.workers)?;
            commands::cmd_quadrature(&cfg)?;
        }
        Command::Montecarlo { overrides } => {
            let cfg = config::load(&overrides)?;
            init_workers(overrides.workers, cfg.workers)?;
            commands::cmd_montecarlo(&cfg)?;
        }
        Command::Converge { overrides } => {
            let cfg = config::load(&overrides)?;
            init_workers(overrides.workers, cfg.workers)?;
            commands::cmd_converge(&cfg)?;
        }
        Command::Verify { json, fault_scale_sharp_constant, item } => {
            init_workers(None, None)?;
            let fault = Fault { scale_sharp_constant: fault_scale_sharp_constant };
            return commands::cmd_verify(json.as_deref(), fault, item);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    // die quietly when the consumer of a pipe goes away (`… --json - | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
