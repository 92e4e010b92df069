//! Command-line driver for the `beamspace` crate: BER sweeps from TOML
//! experiment files, complexity tables and precoder dumps.

pub mod commands;
pub mod config;
mod error;
pub mod manifest;

pub use error::{CliError, CliResult};
