//! Config-driven front end for the `gasfold` library.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod svg;
pub mod table;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::Report;
pub use config::{Format, RunConfig};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "gasfold",
    version,
    about = "Multivalued solutions, caustics and shock fronts of 1-D gas dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Isentrope tables, hyperbolicity and applicability.
    Thermo(Common),
    /// Density profiles at the configured times.
    Profile(Common),
    /// Caustics of both branches.
    Caustic(Common),
    /// Shock fronts continued from the cusps.
    Shock(Common),
    /// Run every invariant check and emit a JSON report.
    Validate(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, overriding `output.dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated formats, overriding `output.formats`.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Self::Thermo(c)
            | Self::Profile(c)
            | Self::Caustic(c)
            | Self::Shock(c)
            | Self::Validate(c) => c,
        }
    }
}

/// Loads the config with command-line overrides applied.
pub fn load(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(out) = &common.out {
        cfg.output.dir = out.clone();
    }
    if let Some(formats) = &common.format {
        cfg.output.formats = formats.clone();
    }
    Ok(cfg)
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let cfg = load(cli.command.common())?;
    match &cli.command {
        Command::Thermo(_) => commands::thermo(&cfg),
        Command::Profile(_) => commands::profile(&cfg),
        Command::Caustic(_) => commands::caustic_cmd(&cfg),
        Command::Shock(_) => commands::shock(&cfg),
        Command::Validate(_) => commands::validate(&cfg),
    }
}
