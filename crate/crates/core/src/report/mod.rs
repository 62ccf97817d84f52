//! Trends, topic distributions, cross-language alignment and file exports.

mod align;
mod export;
mod gexf;
mod trend;

use std::path::PathBuf;

pub use align::{align_trends, AlignedTrend, TrendAlignment, DEFAULT_DELTA_HOURS};
pub use export::{
    export, read_trends_json, render, Artifact, ExportFormat, KeywordRecord, TrendRecord, TrendsDocument,
    write_atomic, TRENDS_SCHEMA_VERSION,
};
pub use gexf::GEXF_NAMESPACE;
pub use trend::{assemble_trends, hour_stamp, topic_distribution, TopicDistribution, Trend};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),
    #[error("no trends to summarize")]
    NoTrends,
    #[error("{artifact} cannot be exported as {format}")]
    UnsupportedFormat { artifact: &'static str, format: ExportFormat },
    #[error("malformed trends file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ReportError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ReportError::Io {
            path: path.into(),
            source,
        }
    }
}
