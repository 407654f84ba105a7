//! Command-line front end: single witness evaluations, parameter sweeps,
//! ε_max curves, Wigner grids and oracle verification, written as CSV or
//! JSON.

pub mod args;
mod commands;
pub mod config_file;
pub mod error;
pub mod grid;
pub mod output;
mod verify;

use args::{Cli, Command};
use config_file::ConfigFile;
use error::{CliError, Result};
use output::{render_csv, render_json, Format};
use qng_core::CatFamily;
use std::io::Write;

/// Result of a run whose output was written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub rows: usize,
    /// Rows (or verify checks) that did not finish with status `ok`.
    pub failures: usize,
}

impl Summary {
    pub fn exit_code(&self) -> u8 {
        if self.failures == 0 {
            0
        } else {
            2
        }
    }
}

/// Runs one command, writing to `--out` if given and to `stdout` otherwise.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<Summary> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let outcome = match &cli.command {
        Command::Witness(a) => commands::witness(&file, a)?,
        Command::SweepOdd(a) => commands::sweep(&file, a, CatFamily::Odd)?,
        Command::SweepEven(a) => commands::sweep(&file, a, CatFamily::Even)?,
        Command::EpsMax(a) => commands::eps_max(&file, a)?,
        Command::WignerGrid(a) => commands::wigner_grid(&file, a)?,
        Command::Verify(a) => verify::verify(&file, a)?,
    };
    let text = match outcome.format {
        Format::Csv => render_csv(&outcome.table)?,
        Format::Json => render_json(&outcome.table, &outcome.config, outcome.extra.clone()),
    };
    match &outcome.out {
        Some(path) => std::fs::write(path, text.as_bytes()).map_err(|source| CliError::Io {
            context: format!("writing {}", path.display()),
            source,
        })?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                context: "writing stdout".into(),
                source,
            })?,
    }
    Ok(Summary {
        rows: outcome.table.rows.len(),
        failures: outcome.failures,
    })
}
