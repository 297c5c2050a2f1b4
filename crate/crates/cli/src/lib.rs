//! Config-driven front end: experiment files, presets, subcommands and
//! heatmap rendering.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod presets;
pub mod render;

pub use commands::{CliError, CliResult};
pub use config::ExperimentConfig;
