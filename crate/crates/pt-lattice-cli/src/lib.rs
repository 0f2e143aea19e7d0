//! Command-line front end for the lattice library: each subcommand resolves
//! its parameters from defaults, an optional JSON config, and explicit flags,
//! then writes a single artifact whose first line echoes the resolved
//! configuration.

pub mod args;
pub mod commands;
pub mod output;

use anyhow::Result;
use clap::Parser;

use args::{Cli, Command};
use output::{header, write_output};

/// Exit codes: 0 success, 2 invalid usage or spec, 3 runtime failure.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<pt_lattice::Error>() {
                Some(le) if le.is_usage() => 2,
                _ => 3,
            }
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let job = cli.command.job();
    let resolved = job.resolve()?;
    let head = header(&resolved);

    let payload = match &cli.command {
        Command::Spectrum(_) => commands::spectrum(&resolved)?,
        Command::Evolve(_) => commands::evolve(&resolved)?,
        Command::Threshold(_) => commands::threshold(&resolved)?,
        Command::Lock(_) => commands::lock(&resolved)?,
        Command::Sweep(_) => commands::sweep(&resolved)?,
        Command::Intertwiners(_) => {
            let (payload, basis) = commands::intertwiners(&resolved)?;
            if let (Some(path), Some(basis)) = (&job.basis_out, basis) {
                write_output(Some(path), &format!("{head}{basis}"))?;
            }
            payload
        }
    };

    write_output(job.out.as_ref(), &format!("{head}{payload}"))
}
