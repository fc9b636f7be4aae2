//! Experiment runner for control authority degradation identification.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;

pub use error::{CliError, CliResult};
