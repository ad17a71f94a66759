//! Library side of the `chern` command: configuration, command runners and
//! result rendering.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, Report};
pub use config::{Command, CoreSpec, ExperimentConfig, Format, Lemma};
pub use error::CliError;
pub use output::{json_document, render};

/// Version of the JSON result and error layouts.
pub const SCHEMA_VERSION: u32 = 1;
