//! Experiment harness behind the `rcflow` binary: config files, frame-stack
//! I/O, metrics and the command drivers.

pub mod commands;
pub mod config;
pub mod metrics;
pub mod stackfile;

use std::path::Path;

pub use commands::{cmd_edit, cmd_equivalence, cmd_flowedit, cmd_generate, cmd_sweep_reuse, CommandOutcome, SweepRow};
pub use config::{ConfigError, ExperimentConfig, FieldSpec, InputSource, MaskSource, Overrides};
pub use metrics::MetricsReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: String, message: String },

    #[error(transparent)]
    Engine(#[from] crate::error::Error),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Engine(e) if e.is_numeric() => EXIT_NUMERIC,
            _ => EXIT_CONFIG,
        }
    }
}
