//! `bic-lab`: configuration, dispatch and output for the biclab-core
//! library.

pub mod commands;
pub mod config;
pub mod emit;
pub mod error;
pub mod reproduce;

use clap::{Parser, Subcommand};
use config::Config;
use emit::Format;
use error::CliError;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "bic-lab", version, about = "Effective-Hamiltonian BIC and photoassociation spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (directory for `reproduce`); stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Suppress warnings and summaries on the terminal.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Microwave-dressed pair from the `dressing` section.
    Dress,
    /// Closed-form BIC detunings and eigenvalue.
    Solve,
    /// Check whether `params` host a BIC.
    Certify,
    /// Scaled spectrum on the `grid` section.
    Spectrum,
    /// Peak metrics over the `sweep` eta values.
    SweepEta,
    /// Width against eta, next to the pole estimate 2|Im E1|.
    WidthCurve,
    /// Dimensionless parameters from the `microscopic` section.
    Derive,
    /// Discretized-continuum check of the effective Hamiltonian.
    Validate,
    /// Rerun a bundled figure parameter set.
    Reproduce {
        #[arg(value_enum)]
        figure: reproduce::Figure,
    },
}

/// Caps the global rayon pool from `BIC_LAB_THREADS` (0 or unset: auto).
pub fn configure_threads() -> Result<(), CliError> {
    let n = match std::env::var("BIC_LAB_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Config(format!("BIC_LAB_THREADS must be a nonnegative integer, got {v:?}")))?,
        Err(_) => 0,
    };
    // a second initialization in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let cfg = || -> Result<Config, CliError> {
        match &cli.config {
            Some(p) => Config::load(p),
            None => Err(CliError::Config("--config is required for this subcommand".into())),
        }
    };
    let output = match cli.command {
        Command::Dress => commands::dress(&cfg()?)?,
        Command::Solve => commands::solve(&cfg()?)?,
        Command::Certify => commands::certify(&cfg()?)?,
        Command::Spectrum => commands::spectrum(&cfg()?)?,
        Command::SweepEta => commands::sweep_eta(&cfg()?, cli.quiet)?,
        Command::WidthCurve => commands::width_curve(&cfg()?, cli.quiet)?,
        Command::Derive => commands::derive(&cfg()?)?,
        Command::Validate => commands::validate_oracle(&cfg()?, cli.quiet)?,
        Command::Reproduce { figure } => {
            let dir = cli.out.clone().unwrap_or_else(|| {
                PathBuf::from(match figure {
                    reproduce::Figure::Fig3 => "fig3",
                    reproduce::Figure::Fig4 => "fig4",
                    reproduce::Figure::Fig5 => "fig5",
                })
            });
            let summary = reproduce::reproduce(figure, &dir)?;
            if !cli.quiet {
                print!("{}", summary.text());
            }
            return Ok(());
        }
    };
    emit::write_text(cli.out.as_deref(), &output.render(cli.format)?)
}
