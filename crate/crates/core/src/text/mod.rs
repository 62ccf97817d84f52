//! Summary tokenization and cluster descriptors: degree-weighted TF-IDF
//! keywords and an LDA topic model over cluster documents.

mod docs;
mod lda;
mod tfidf;
mod tokenize;

pub use docs::{build_cluster_docs, ClusterDoc};
pub use lda::{lda_fit, lda_top_words, GibbsState, LdaConfig, LdaModel};
pub use tfidf::{tfidf_keywords, Keyword, KeywordConfig, KeywordScores};
pub use tokenize::{LangConfig, Tokenizer};

#[derive(Debug, thiserror::Error)]
pub enum TextError {
    #[error("corpus has no documents or no tokens")]
    EmptyCorpus,
    #[error("number of topics must be at least 1")]
    InvalidK,
    #[error("topic {index} out of range for {k} topics")]
    BadTopicIndex { index: usize, k: usize },
    #[error("invalid keyword config: k must be at least 1")]
    InvalidKeywordConfig,
    #[error("I/O error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}
