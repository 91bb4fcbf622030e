//! `incid`: command-line driver for planar r-divisions, curve arrangements
//! and incidence constructions.
//!
//! Exit status is 0 on success, 2 when a verification fails (the witness
//! goes to stderr) and 1 on bad input.

mod division;
mod geometry;
mod incidence;
mod manifest;
mod output;

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::{Serialize, Serializer};

use manifest::RunManifest;
use output::{csv_help, emit, render, Format, Report};

/// Environment variable naming the default output directory.
const OUT_DIR_VAR: &str = "INCID_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "incid", version, about = "Planar r-divisions, curve arrangements and incidence constructions")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json", visible_alias = "report")]
    format: Format,
    /// Output file; defaults to <out-dir>/<command>.<ext>, else stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Default output directory
    #[arg(long, global = true, env = OUT_DIR_VAR)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum Command {
    /// Refined (or classic) r-division of an embedded planar graph, verified
    Rdiv(division::RdivArgs),
    /// Re-verify a division file written by `rdiv --division-out`
    Verify(division::VerifyArgs),
    /// Arrangement graph of points and k-intersecting curves
    Arrange(geometry::ArrangeArgs),
    /// Point-line lattice incidence counts and point-graph bounds
    Lattice(incidence::LatticeArgs),
    /// Random sampling with deletion on the lattice, over several seeded trials
    LowerBound(incidence::LowerBoundArgs),
    /// First forbidden configuration of an incidence structure
    ForbidScan(incidence::ForbidScanArgs),
    /// Lattice, truncation, gadgets, division, blocks and block hypergraphs
    Pipeline(incidence::PipelineArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Rdiv(_) => "rdiv",
            Command::Verify(_) => "verify",
            Command::Arrange(_) => "arrange",
            Command::Lattice(_) => "lattice",
            Command::LowerBound(_) => "lower-bound",
            Command::ForbidScan(_) => "forbid-scan",
            Command::Pipeline(_) => "pipeline",
        }
    }
}

/// Serializes a value through its `Display` form.
pub(crate) fn display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn command() -> clap::Command {
    let env_note = format!("The default output directory may also be set with {OUT_DIR_VAR}.");
    let layouts: [(&str, &[output::Column]); 7] = [
        ("rdiv", division::REGION_COLUMNS),
        ("verify", division::REGION_COLUMNS),
        ("arrange", geometry::VERTEX_COLUMNS),
        ("lattice", incidence::LATTICE_COLUMNS),
        ("lower-bound", incidence::TRIAL_COLUMNS),
        ("forbid-scan", incidence::SCAN_COLUMNS),
        ("pipeline", incidence::PART_COLUMNS),
    ];
    let mut cmd = Cli::command().after_help(env_note);
    for (name, columns) in layouts {
        cmd = cmd.mut_subcommand(name, |c| c.after_help(csv_help(columns)));
    }
    cmd
}

#[derive(Serialize)]
struct Config<'a> {
    format: Format,
    #[serde(flatten)]
    args: &'a Command,
}

fn run(cli: &Cli) -> Result<(RunManifest, Report)> {
    let mut m = RunManifest::new(cli.command.name(), &Config { format: cli.format, args: &cli.command });
    let report = match &cli.command {
        Command::Rdiv(a) => division::rdiv(a, &mut m)?,
        Command::Verify(a) => division::verify(a, &mut m)?,
        Command::Arrange(a) => geometry::arrange(a, &mut m)?,
        Command::Lattice(a) => incidence::lattice(a)?,
        Command::LowerBound(a) => incidence::lower_bound(a)?,
        Command::ForbidScan(a) => incidence::forbid_scan(a, &mut m)?,
        Command::Pipeline(a) => incidence::pipeline(a)?,
    };
    Ok((m, report))
}

fn main() -> ExitCode {
    let matches = match command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let outcome = run(&cli).and_then(|(m, report)| {
        let text = render(&m, &report, cli.format)?;
        emit(&text, cli.out.as_ref(), cli.out_dir.as_ref(), cli.command.name(), cli.format)?;
        Ok(report.failure)
    });
    match outcome {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(witness)) => {
            eprintln!("{witness}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
