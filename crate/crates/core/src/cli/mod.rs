//! Command-line interface.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use config::Options;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError { code: EXIT_VALIDATION, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError { code: EXIT_NUMERICAL, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { code: EXIT_IO, message: message.into() }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        let code = if e.is_validation() { EXIT_VALIDATION } else { EXIT_NUMERICAL };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nwell", version, about = "Semiclassical bands of finite periodic multiple-well potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split levels Eₙ(s) of one or more bands.
    Bands(Options),
    /// Band energy of the periodic extension versus Bloch wavenumber.
    Dispersion(Options),
    /// Closed-form Mathieu band widths against characteristic values.
    Mathieu(Options),
    /// Spectrum of a symmetric circulant (ring) Hamiltonian.
    Ring(Options),
    /// Finite-difference check of a band pattern.
    Verify(Options),
}

/// Parses `args`, runs the command and returns the process exit code.
/// Reports go to `--out` or `stdout`; diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let (outcome, options) = match command {
        Command::Bands(o) => {
            let o = o.resolve()?;
            (commands::bands(&o)?, o)
        }
        Command::Dispersion(o) => {
            let o = o.resolve()?;
            (commands::dispersion(&o)?, o)
        }
        Command::Mathieu(o) => {
            let o = o.resolve()?;
            (commands::mathieu(&o)?, o)
        }
        Command::Ring(o) => {
            let o = o.resolve()?;
            (commands::ring(&o)?, o)
        }
        Command::Verify(o) => {
            let o = o.resolve()?;
            (commands::verify(&o)?, o)
        }
    };
    let bytes = outcome.report.render(options.format())?;
    match &options.out {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?,
        None => stdout.write_all(&bytes).map_err(|e| CliError::io(format!("cannot write output: {e}")))?,
    }
    for line in &outcome.warnings {
        let _ = writeln!(stderr, "warning: {line}");
    }
    match outcome.failure {
        Some(message) => Err(CliError::numerical(message)),
        None => Ok(EXIT_OK),
    }
}
