//! Batch command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 numerical failure.

mod commands;
mod config;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CmdError, Ctx};
use config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "marketlab",
    about = "Capitalization-weighted indices, CAPM-AR(p)-SV event studies, and model-lab reports",
    disable_help_subcommand = true
)]
struct Cli {
    /// Run configuration file.
    #[arg(long, global = true, default_value = "run.toml")]
    config: PathBuf,
    /// Override the root seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the significance level.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Override the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build PI/API/TRI index levels and market-capitalization shares.
    Index,
    /// Descriptive statistics and ADF-GLS unit-root tests per portfolio.
    Stats,
    /// CAPM-AR(p)-SV coefficient tables per index variant and sample window.
    Estimate {
        /// Estimate from a synthetic returns table instead of panel data.
        #[arg(long)]
        returns: Option<PathBuf>,
    },
    /// Event studies: sign tables, detail files, optional CAR plots.
    Event,
    /// Model-lab subcommands.
    Model {
        #[command(subcommand)]
        cmd: ModelCommand,
    },
}

#[derive(Debug, Subcommand)]
enum ModelCommand {
    /// Simulate the equilibrium path and write it as CSV.
    Simulate {
        /// Use the extended (regime-risk / embedded-rent) block.
        #[arg(long)]
        extended: bool,
    },
    /// Run the proposition sweeps and report violations.
    CheckProps,
    /// Generate a synthetic returns panel with recorded ground truth.
    Synth,
}

fn run(cli: Cli) -> Result<(), CmdError> {
    let (cfg, text) = RunConfig::load(&cli.config).map_err(CmdError::Input)?;
    let ctx = Ctx::new(cfg, &text, cli.seed, cli.alpha, cli.out);
    match cli.command {
        Command::Index => commands::cmd_index(&ctx),
        Command::Stats => commands::cmd_stats(&ctx),
        Command::Estimate { returns } => commands::cmd_estimate(&ctx, returns.as_deref()),
        Command::Event => commands::cmd_event(&ctx),
        Command::Model { cmd } => match cmd {
            ModelCommand::Simulate { extended } => commands::cmd_model_simulate(&ctx, extended),
            ModelCommand::CheckProps => commands::cmd_model_check_props(&ctx),
            ModelCommand::Synth => commands::cmd_model_synth(&ctx),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap routes --help/--version through the error path; keep
            // those at 0 and real usage errors at 1
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
