//! `fracton`: sweeps, tables and graphs for fractal particle classes.
//!
//! Exit status: 0 on success, 1 when `verify` finds a failing check, 2 on
//! usage or domain errors (including any failed row of a sweep).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod grid;
mod verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "fracton", version, about = "Fractal classification of fractional-spin particles")]
struct Cli {
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Occupation n = 1/(Y - h) and related quantities over a fugacity grid.
    Distribution(commands::DistributionArgs),
    /// Entanglement measure E[h, p] for one or more classes.
    EntanglementCurve(commands::CurveArgs),
    /// Entanglement of a state read from an amplitude file.
    State(commands::StateArgs),
    /// Transition graph between filling factors of one band.
    Farey(commands::FareyArgs),
    /// Low-temperature occupation (h, nu, n) table.
    Table(commands::TableArgs),
    /// Class, spin and occupation of filling factors.
    Classify(commands::ClassifyArgs),
    /// Run the identity suite and report PASS/FAIL per check.
    Verify(verify::VerifyArgs),
}

fn run(cli: &Cli) -> Result<u8> {
    let report = match &cli.command {
        Command::Distribution(args) => commands::distribution(args, cli.format)?,
        Command::EntanglementCurve(args) => commands::entanglement_curve(args, cli.format)?,
        Command::State(args) => commands::state(args, cli.format)?,
        Command::Farey(args) => commands::farey(args, cli.format)?,
        Command::Table(args) => commands::table(args, cli.format)?,
        Command::Classify(args) => commands::classify(args, cli.format)?,
        Command::Verify(args) => verify::verify(args)?,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, &report.body)
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(report.body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(report.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
