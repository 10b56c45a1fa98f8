//! `qtraj`: scenario-driven runner for the trajectory representation of
//! stationary quantum mechanics.
//!
//! Exit codes: 0 when the run succeeds and every verification check passes,
//! 2 when the run succeeds but a check exceeds its tolerance, 1 for any
//! input or I/O error.

// Validation deliberately writes `!(x > 0.0)`: unlike `x <= 0.0`, it also
// rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod report;
mod run;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::run::RunConfig;
use crate::scenario::Mode;

#[derive(Parser)]
#[command(
    name = "qtraj",
    version,
    about = "Quantum trajectory toolkit: scenario JSON in, CSV data and a verification report out"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesize the sub-barrier running wave and verify its continuity
    Tunnel(RunArgs),
    /// Evaluate a bound-state pair, its microstate wave, and J/h
    Bound(RunArgs),
    /// Tabulate t(x) by differentiating the reduced action in energy
    Trajectory(RunArgs),
    /// Sweep hbar toward zero and check the classical-limit invariants
    ClassicalLimit(RunArgs),
    /// Run a scenario's verification checks without writing data files
    Verify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the scenario JSON document
    scenario: PathBuf,
    /// Directory for CSV and report files
    #[arg(long, default_value = "./out")]
    out: PathBuf,
    /// Multiplier applied to every verification tolerance
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<bool> {
    init_thread_pool()?;
    let (args, expected) = match &cli.cmd {
        Cmd::Tunnel(a) => (a, Some(Mode::Tunnel)),
        Cmd::Bound(a) => (a, Some(Mode::Bound)),
        Cmd::Trajectory(a) => (a, Some(Mode::Trajectory)),
        Cmd::ClassicalLimit(a) => (a, Some(Mode::ClassicalLimit)),
        Cmd::Verify(a) => (a, None),
    };
    if !(args.tolerance_scale > 0.0 && args.tolerance_scale.is_finite()) {
        bail!("--tolerance-scale must be positive and finite, got {}", args.tolerance_scale);
    }
    let text = std::fs::read(&args.scenario)
        .with_context(|| format!("reading {}", args.scenario.display()))?;
    let scenario = scenario::parse_scenario(&text)?;
    if let Some(mode) = expected {
        if scenario.mode != mode {
            bail!(
                "scenario mode \"{}\" does not match the \"{}\" subcommand",
                scenario.mode.name(),
                mode.name()
            );
        }
    }
    let cfg = RunConfig {
        out_dir: args.out.clone(),
        tolerance_scale: args.tolerance_scale,
        write_data: expected.is_some(),
    };
    run::execute(&scenario, &cfg)
}

/// Cap the data-parallel grid evaluation at QTRAJ_THREADS workers
/// (0 or unset: one per core).
fn init_thread_pool() -> Result<()> {
    if let Ok(raw) = std::env::var("QTRAJ_THREADS") {
        let n: usize = raw
            .trim()
            .parse()
            .with_context(|| format!("QTRAJ_THREADS: expected a number, got {raw:?}"))?;
        if n > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("initializing the thread pool")?;
        }
    }
    Ok(())
}
