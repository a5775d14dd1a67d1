//! Config-driven front end for the `leeyang` binary: run configurations,
//! file formats, figure presets and the subcommands.

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;

pub use commands::{cmd_correlate, cmd_evolve, cmd_reproduce, cmd_zeros, CliError};
pub use config::{ConfigError, ModelConfig, RunConfig, ValidationError};
pub use output::{Report, SeriesTable, ZerosTable};
pub use presets::{all_panels, Figure, Panel};
