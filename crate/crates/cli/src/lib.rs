//! Batch front end for the `beatfield` library.
//!
//! [`parse_config`] turns flags and an optional config file into a
//! validated [`RunConfig`]; [`run`] dispatches it and writes CSV or JSON
//! artifacts into the output directory.

pub mod config;
pub mod run;

pub use config::{parse_config, parse_config_text, Command, ConfigError, OutputFormat, RunConfig, OUT_DIR_ENV};
pub use run::{run, RunError, RunOutcome};

/// Exit status for invalid configuration or model parameters.
pub const EXIT_INVALID: u8 = 2;
