//! Front end for the `pinch` binary: configuration, shape catalog, report
//! files and the subcommands that tie them to `pinch-core`.

pub mod catalog;
pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Pass = 0,
    CheckFailed = 1,
    Config = 2,
    Numerical = 3,
}

impl ExitStatus {
    /// Exit status for an error raised while running a command.
    pub fn classify(err: &anyhow::Error) -> Self {
        use pinch_core::Error as E;
        match err.chain().find_map(|e| e.downcast_ref::<E>()) {
            Some(
                E::ClassViolation { .. } | E::HemisphereViolation { .. } | E::NotHemisphere(_),
            ) => Self::CheckFailed,
            Some(e) if e.is_numerical() => Self::Numerical,
            _ => Self::Config,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SpaceArg {
    Euclidean,
    Spherical,
}

#[derive(Debug, Parser)]
#[command(
    name = "pinch",
    version,
    about = "Curvature pinching diagnostics for hypersurfaces of space forms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the available shapes and their parameters.
    Catalog {
        #[arg(long, value_enum)]
        space: Option<SpaceArg>,
        #[arg(long)]
        json: bool,
    },
    /// Run the full analysis for one configuration.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the analysis for every value of the configured sweep.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Catalog { space, json } => {
            let space = match space {
                None => catalog::Space::Any,
                Some(SpaceArg::Euclidean) => catalog::Space::Euclidean,
                Some(SpaceArg::Spherical) => catalog::Space::Spherical,
            };
            commands::cmd_catalog(space, json).map(|text| {
                print!("{text}");
                ExitStatus::Pass
            })
        }
        Command::Analyze { config, out } => commands::cmd_analyze(&config, out.as_deref()),
        Command::Sweep { config, out } => commands::cmd_sweep(&config, out.as_deref()),
    };
    match result {
        Ok(status) => status as i32,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitStatus::classify(&e) as i32
        }
    }
}
