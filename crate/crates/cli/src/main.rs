// SPDX-License-Identifier: Apache-2.0

//! `addersim`: list, emit, verify, simulate, lint and compare MOS adder
//! cells at switch level.
//!
//! Exit codes: 0 success, 2 verification or lint failure, 3 unreadable or
//! malformed input, 4 stimulus that does not fit the design, 1 internal
//! error, 64 bad command line.

mod commands;
mod config;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Format, ParamFlags};

#[derive(Debug, Parser)]
#[command(name = "addersim", version, about = "Switch-level simulation of MOS full-adder cells")]
struct Cli {
    #[command(flatten)]
    params: ParamFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the built-in cells
    List,
    /// Write the netlist of a built-in cell
    Netlist {
        cell: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a cell or netlist against its truth table
    Verify { target: String },
    /// Run a transient simulation and write the trace
    Sim {
        netlist: PathBuf,
        #[arg(long)]
        stimulus: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Structural lint of a netlist file
    Lint { netlist: PathBuf },
    /// Tabulate transistor count, area, delay, power and PDP
    Compare {
        #[arg(required_unless_present = "all")]
        cells: Vec<String>,
        /// All seven adders in table order
        #[arg(long, conflicts_with = "cells")]
        all: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A command that could not complete, with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::parse(format!("{}: {err}", path.display()))
    }

    pub fn stimulus(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let settings = config::resolve(config::FileConfig::discover()?, &cli.params)?;
    match cli.command {
        Command::List => commands::list(),
        Command::Netlist { cell, output } => commands::netlist(&cell, output.as_deref()),
        Command::Verify { target } => commands::verify(&target, &settings.params),
        Command::Sim {
            netlist,
            stimulus,
            output,
        } => commands::sim(&netlist, &stimulus, output.as_deref(), &settings.params),
        Command::Lint { netlist } => commands::lint(&netlist),
        Command::Compare {
            cells,
            all,
            format,
            output,
        } => {
            let format = format.or(settings.format).unwrap_or(Format::Md);
            commands::compare(&cells, all, format, output.as_deref(), &settings.params)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("addersim: {f}");
            ExitCode::from(f.code)
        }
    }
}
