//! `earoot`: runs scenario files through the library and prints reports.
//!
//! Exit status is 0 when every claim in the report holds, 2 when some claim
//! fails and 1 on unreadable or invalid input.

mod commands;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use commands::WindowChoice;
use report::Report;

#[derive(Parser)]
#[command(name = "earoot", version, about = "Exact checks for extended affine root systems and their fixed points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Axioms R1-R7 of a presentation on a window.
    Ears {
        #[command(subcommand)]
        action: EarsAction,
    },
    /// Fixed roots, isolated classes and decomposition under a character.
    Fixpoint {
        #[command(subcommand)]
        action: FixpointAction,
    },
    /// Fixed points, roots and tameness for a quantum-torus matrix example.
    Qtorus {
        #[command(subcommand)]
        action: RunAction,
    },
    /// Twisted affinization and EALA window checks.
    Affinize {
        #[command(subcommand)]
        action: RunAction,
    },
}

#[derive(Subcommand)]
enum EarsAction {
    Verify(Args),
}

#[derive(Subcommand)]
enum FixpointAction {
    Decompose(Args),
}

#[derive(Subcommand)]
enum RunAction {
    Run(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Scenario JSON file, or `-` for stdin.
    #[arg(long)]
    scenario: PathBuf,
    /// Window radius; overrides the scenario and EAROOT_WINDOW.
    #[arg(long)]
    window: Option<i64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Add wall-clock time to the report (makes it nondeterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn read_scenario(path: &Path) -> Result<Value> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).context("reading stdin")?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    serde_json::from_str(&text).map_err(|e| anyhow!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
}

fn env_window() -> Result<Option<i64>> {
    match std::env::var("EAROOT_WINDOW") {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| anyhow!("EAROOT_WINDOW must be an integer, got {s:?}")),
        Err(_) => Ok(None),
    }
}

fn execute(run: fn(Value, WindowChoice) -> Result<Report>, args: &Args) -> Result<Report> {
    let raw = read_scenario(&args.scenario)?;
    let window = WindowChoice { flag: args.window, env: env_window()? };
    let start = Instant::now();
    let mut report = run(raw, window).with_context(|| format!("scenario {}", args.scenario.display()))?;
    if args.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (run, args): (fn(Value, WindowChoice) -> Result<Report>, &Args) = match &cli.command {
        Command::Ears { action: EarsAction::Verify(a) } => (commands::ears_verify, a),
        Command::Fixpoint { action: FixpointAction::Decompose(a) } => (commands::fixpoint_decompose, a),
        Command::Qtorus { action: RunAction::Run(a) } => (commands::qtorus_run, a),
        Command::Affinize { action: RunAction::Run(a) } => (commands::affinize_run, a),
    };
    let report = match execute(run, args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let rendered = match args.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    let written = match &args.output {
        Some(path) => std::fs::write(path, &rendered).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{rendered}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
