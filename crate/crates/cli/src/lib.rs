//! Configuration, subcommands and CSV output for the `xidd` binary.

pub mod commands;
pub mod config;
pub mod curve;
pub mod error;

pub use config::{parse_config, Overrides, RunConfig, SchemeChoice, DEFAULT_T_MAX};
pub use curve::{compute_curve, parse_csv, CurveTable};
pub use error::{exit, CliError, Result};
