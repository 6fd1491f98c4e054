use std::fs;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

mod commands;
mod instance;
mod report;

use commands::median::MedianArgs;
use commands::vanishing::{CupArgs, MasseyArgs};
use instance::InstanceArgs;
use report::Report;

/// Weight quasimorphisms: defects, cup-product primitives, Massey witnesses
/// and median-graph checks.
#[derive(Parser, Debug)]
#[command(name = "wqm", version)]
struct Cli {
    /// Print a plain-text table instead of JSON.
    #[arg(long, global = true)]
    table: bool,

    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Empirical defect of a weight quasimorphism against the analytic bound.
    Defect(InstanceArgs),
    /// Bounded primitives for δf_W ∪ ζ and ζ ∪ δf_W.
    Cup(CupArgs),
    /// Bounded witness that a Massey triple product contains zero.
    Massey(MasseyArgs),
    /// Median complex combinatorics and median quasimorphisms.
    Median(MedianArgs),
    /// Check the weight conditions on a sample.
    VerifyWeight(InstanceArgs),
    /// Check the coherent-pair conditions and the quasi-median property.
    VerifyCoherence(InstanceArgs),
    /// Check the Δ-decomposition axioms on a ball.
    VerifyDelta(InstanceArgs),
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Defect(a) => commands::defect::run(a),
        Command::Cup(a) => commands::vanishing::run_cup(a),
        Command::Massey(a) => commands::vanishing::run_massey(a),
        Command::Median(a) => commands::median::run(a),
        Command::VerifyWeight(a) => commands::verify::run_weight(a),
        Command::VerifyCoherence(a) => commands::verify::run_coherence(a),
        Command::VerifyDelta(a) => commands::verify::run_delta(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|report| {
        let json = report.to_json();
        if let Some(path) = &cli.out {
            fs::write(path, &json).with_context(|| format!("writing {path}"))?;
        }
        if cli.table {
            print!("{}", report.to_table());
        } else {
            print!("{json}");
        }
        Ok(report.status())
    });
    match result {
        Ok(status) if status.is_pass() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
