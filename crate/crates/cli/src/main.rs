use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use xidd_cli::{commands, exit, parse_config, CliError, Overrides};
use xidd_core::{ChiConvention, Scheme};

const EXIT_CODES: &str = "\
Exit status:
  0  success
  1  a check ran and failed (verify-group, oracle-check)
  2  invalid configuration, flag or argument
  3  quadrature or oracle did not converge
  4  file read or write failed";

/// Bang-bang decoupling of ladder-type atoms under Ohmic pure dephasing.
#[derive(Parser)]
#[command(name = "xidd", version, after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the group-averaged sigma_z vanishes for every transition
    #[command(after_help = EXIT_CODES)]
    VerifyGroup {
        #[arg(long)]
        n: usize,
    },
    /// Print the pulse fractions of a PDD or UDD sequence
    #[command(after_help = EXIT_CODES)]
    Schedule {
        #[arg(long)]
        scheme: Scheme,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cycles: usize,
        #[arg(long)]
        total_time: f64,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute P(T) on a time grid and write it as CSV
    #[command(after_help = EXIT_CODES)]
    Curve {
        /// `key = value` file; flags override its entries
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Compare the closed-form decay with a Fock-space evolution
    #[command(after_help = EXIT_CODES)]
    OracleCheck {
        /// Filter convention under test (literal and flipped-center are
        /// known-wrong controls)
        #[arg(long, default_value = "toggling")]
        chi_convention: ChiConvention,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::VerifyGroup { n } => commands::verify_group(n, &mut stdout),
        Command::Schedule {
            scheme,
            n,
            cycles,
            total_time,
            out,
        } => commands::schedule(scheme, n, cycles, total_time, out.as_deref(), &mut stdout),
        Command::Curve { config, overrides } => {
            let config = parse_config(config.as_deref(), &overrides)?;
            commands::curve(&config, &mut stdout).map(|(code, _)| code)
        }
        Command::OracleCheck { chi_convention } => commands::oracle_check(chi_convention, &mut stdout),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::VALIDATION } else { exit::OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
