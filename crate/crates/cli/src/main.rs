mod commands;
mod config;

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use jetvar::symbolic::{set_max_terms, TermLimitExceeded};

use commands::{CommandError, Output};
use config::RunConfig;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TERM_LIMIT: u8 = 3;

/// Exact verification of variational identities for Chern-Simons gauge models.
#[derive(Debug, Parser)]
#[command(name = "jetvar", version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the untruncated output to this file.
    #[arg(long, global = true)]
    dump: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate structure constants and the invariant tensor.
    CheckAlgebra,
    /// Check the transgression identity for the configured model.
    Transgression,
    /// Print the field equations of the CS Lagrangian.
    EulerLagrange {
        /// Also compare the symbolic and zero backgrounds.
        #[arg(long)]
        compare_background: bool,
    },
    /// Print the Noether current along the gauge generator.
    Noether,
    /// Build the boundary term and check conservation of the modified current.
    VerifyConservation,
    /// Check the first variational formula on seeded random Lagrangians.
    FirstVariationalSelftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per base dimension.
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

fn config(cli: &Cli) -> Result<RunConfig, CommandError> {
    let path = cli.config.as_ref().ok_or_else(|| CommandError::Usage("this command needs --config <path>".into()))?;
    Ok(RunConfig::load(path)?)
}

fn run(cli: &Cli) -> Result<Output, CommandError> {
    match &cli.command {
        Command::CheckAlgebra => commands::check_algebra(&config(cli)?),
        Command::Transgression => commands::transgression(&config(cli)?),
        Command::EulerLagrange { compare_background } => {
            commands::euler_lagrange_cmd(&config(cli)?, *compare_background)
        }
        Command::Noether => commands::noether(&config(cli)?),
        Command::VerifyConservation => commands::verify_conservation(&config(cli)?),
        Command::FirstVariationalSelftest { seed, count } => commands::first_variational_selftest(*seed, *count),
    }
}

fn term_limit_from_env() -> Result<(), String> {
    match std::env::var("JETVAR_MAX_TERMS") {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| format!("JETVAR_MAX_TERMS must be a positive integer, got `{v}`"))?;
            if n == 0 {
                return Err("JETVAR_MAX_TERMS must be positive".into());
            }
            set_max_terms(n);
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = term_limit_from_env() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let default_hook = panic::take_hook();
    panic::set_hook(Box::new(move |info| {
        if info.payload().downcast_ref::<TermLimitExceeded>().is_none() {
            default_hook(info);
        }
    }));

    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(|| run(&cli)));
    eprintln!("elapsed: {} ms", start.elapsed().as_millis());
    let output = match result {
        Ok(Ok(out)) => out,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(payload) => match payload.downcast_ref::<TermLimitExceeded>() {
            Some(t) => {
                eprintln!("error: expansion reached {} monomials, above the limit of {}", t.terms, t.limit);
                return ExitCode::from(EXIT_TERM_LIMIT);
            }
            None => panic::resume_unwind(payload),
        },
    };
    print!("{}", output.screen);
    if let Some(path) = &cli.dump {
        if let Err(e) = std::fs::write(path, &output.dump) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if output.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
