//! Command-line front end, file formats and verification harness for [`cohgen_core`].
//!
//! - [`json`]: matrix JSON, 17-digit float output, trajectory CSV.
//! - [`config`]: `key=value` solver configuration files and flag overrides.
//! - [`grid`]: `start:stop:steps` time grids.
//! - [`solve`]: numeric capacity with restarts on the rayon pool.
//! - [`verify`]: the self-verification suite behind `cohgen verify`.
//! - [`commands`], [`cli`]: subcommand implementations and argument parsing.

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod grid;
pub mod json;
pub mod solve;
pub mod verify;

pub use error::{exit, CliError, Result};
