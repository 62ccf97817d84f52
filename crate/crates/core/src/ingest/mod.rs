//! Pageview dumps, hyperlink edge lists and article summaries.

mod cache;
mod edges;
mod fetch;
mod index;
mod matrix;
mod pageview;
mod summaries;
mod synthetic;

use std::path::PathBuf;

pub use cache::{read_index, read_matrix, write_index, write_matrix, MATRIX_MAGIC};
pub use edges::{load_edges, parse_edges, read_edge_titles, EdgeList, EdgeLoad};
pub use fetch::{fetch_summary, FetchError, DEFAULT_ENDPOINT};
pub use index::{PageId, PageIndex};
pub use matrix::{build_view_matrix, prefilter, ViewMatrix};
pub use pageview::{hour_from_file_name, parse_pageview_line, read_pageview_file, ViewRecord};
pub use summaries::{load_summaries, SummaryStore};
pub use synthetic::{generate_synthetic, BurstWindow, SyntheticData, SyntheticSpec, SYNTHETIC_START_HOUR};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("malformed pageview line {line:?}: {reason}")]
    MalformedLine { line: String, reason: &'static str },
    #[error("{path}:{line_no}: {reason}")]
    Parse {
        path: PathBuf,
        line_no: usize,
        reason: String,
    },
    #[error("empty hour range [{start}, {end})")]
    EmptyRange { start: i64, end: i64 },
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("bad cache file: {0}")]
    BadCache(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl IngestError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IngestError::Io {
            path: path.into(),
            source,
        }
    }
}
