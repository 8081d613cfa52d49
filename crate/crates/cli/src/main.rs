use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use netsense_cli::{execute, parse_scenario, write_all, Command, Overrides};

#[derive(Parser)]
#[command(name = "netsense", version, about = "Entangled sensor-network experiments")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Repeat a protocol and compare its variance with the bounds.
    Run(Common),
    /// Optimize two-qubit controls across the alpha2 grid.
    Fig2Sweep(Common),
    /// Print and write the bounds for a network.
    Bounds(Common),
    /// Check that reduced states carry no information about q.
    Secrecy(Common),
    /// Compare Monte Carlo tau averages with exact enumeration.
    TauCheck(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scenario: PathBuf,
    /// Master seed; overrides NETSENSE_SEED and the scenario.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; defaults to the scenario's `output`, then `out/<name>`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads. Results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
}

fn dispatch(cli: Cli) -> Result<()> {
    let (command, common) = match cli.command {
        Sub::Run(c) => (Command::Run, c),
        Sub::Fig2Sweep(c) => (Command::Fig2Sweep, c),
        Sub::Bounds(c) => (Command::Bounds, c),
        Sub::Secrecy(c) => (Command::Secrecy, c),
        Sub::TauCheck(c) => (Command::TauCheck, c),
    };
    let scenario = parse_scenario(&common.scenario)?;
    let overrides = Overrides {
        seed: common.seed,
        shots: common.shots,
        repetitions: common.reps,
        out: common.out.clone(),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = common.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("building thread pool")?;
    let artifacts = pool.install(|| execute(command, &scenario, &overrides))?;
    let dir = common
        .out
        .or_else(|| scenario.output.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&scenario.name));
    if command == Command::Bounds {
        if let Some(a) = artifacts.iter().find(|a| a.name == "bounds.csv") {
            print!("{}", String::from_utf8_lossy(&a.contents));
        }
    }
    write_all(&dir, &artifacts)?;
    log::info!("wrote {} files to {}", artifacts.len(), dir.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
