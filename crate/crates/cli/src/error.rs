use std::path::PathBuf;

use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {message}")]
    Config {
        message: String,
        line: Option<usize>,
        column: Option<usize>,
    },

    #[error("cannot access {}: {message}", path.display())]
    Io { path: PathBuf, message: String },

    /// The projected matrix would exceed the configured dimension cap.
    #[error(
        "resource limit: {command} needs {states}x{states} matrices (cap {cap}), about {gib:.1} GiB; \
         reduce the volume or raise limits.max_states"
    )]
    Resource {
        command: &'static str,
        states: usize,
        cap: usize,
        gib: f64,
    },

    #[error(transparent)]
    Compute(#[from] ncchern::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "config",
            CliError::Io { .. } => "io",
            CliError::Resource { .. } => "resource",
            CliError::Compute(e) => e.kind(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => 2,
            // An unresolvable name in the configuration.
            CliError::Compute(ncchern::Error::Lookup(_)) => 2,
            CliError::Resource { .. } => 3,
            CliError::Compute(_) => 1,
        }
    }

    /// The machine-readable error object written to stderr.
    pub fn to_json(&self) -> Value {
        let mut error = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::Config { line, column, .. } => {
                if let Some(l) = line {
                    error["line"] = json!(l);
                }
                if let Some(c) = column {
                    error["column"] = json!(c);
                }
            }
            CliError::Resource { states, cap, gib, .. } => {
                error["states"] = json!(states);
                error["cap"] = json!(cap);
                error["estimated_gib"] = json!(gib);
            }
            CliError::Compute(ncchern::Error::Realization { seed, .. }) => {
                error["seed"] = json!(seed);
            }
            _ => {}
        }
        json!({ "schema_version": crate::SCHEMA_VERSION, "error": error })
    }
}
