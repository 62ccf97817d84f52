//! Config-driven pipeline behind the `wikitrends` binary.
//!
//! Each stage reads the artifacts of the stages before it from the output
//! directory, so the stage subcommands run one after another leave the same
//! files as `run`.

pub mod config;
pub mod manifest;
pub mod pipeline;
pub mod synth;

pub use config::{derive_seed, PipelineConfig, CONFIG_VERSION};
pub use manifest::{write_manifest, Manifest};
pub use pipeline::{run_pipeline, run_stage, Stage};
pub use synth::{write_fixture, FixtureOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{stage} [{language}]: {message}")]
    Data {
        stage: &'static str,
        language: String,
        message: String,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data { .. } => 3,
            CliError::Internal(_) => 4,
        }
    }

    pub(crate) fn data(stage: &'static str, language: &str, message: impl ToString) -> Self {
        CliError::Data {
            stage,
            language: language.to_owned(),
            message: message.to_string(),
        }
    }
}
