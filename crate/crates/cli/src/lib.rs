//! Library half of the `umean` command-line tool: argument definitions,
//! dataset ingestion, commands and output formats.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod output;

pub use config::{Cli, Command};
pub use error::{CliError, Result};

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Estimate(a) => commands::estimate(a),
        Command::Scan(a) => commands::scan(a),
        Command::Fit(a) => commands::fit(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Reproduce(a) => commands::reproduce(a),
    }
}
