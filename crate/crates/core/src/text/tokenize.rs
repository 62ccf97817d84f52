use std::collections::BTreeSet;
use std::path::Path;

use super::TextError;

/// Splits text into tokens. Implementations may filter further, e.g. by part
/// of speech.
pub trait Tokenizer: Send + Sync {
    fn tokenize(&self, text: &str) -> Vec<String>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LangConfig {
    pub language: String,
    stopwords: BTreeSet<String>,
    pub min_token_len: usize,
}

impl LangConfig {
    pub fn new<I, S>(language: impl Into<String>, stopwords: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        LangConfig {
            language: language.into(),
            stopwords: stopwords
                .into_iter()
                .map(|s| s.as_ref().trim().to_lowercase())
                .filter(|s| !s.is_empty())
                .collect(),
            min_token_len: 2,
        }
    }

    /// Reads a stopword file with one word per line; `#` starts a comment line.
    pub fn from_stopword_file(language: impl Into<String>, path: &Path) -> Result<Self, TextError> {
        let text = std::fs::read_to_string(path).map_err(|source| TextError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(LangConfig::new(
            language,
            text.lines().filter(|l| !l.trim_start().starts_with('#')),
        ))
    }

    pub fn with_min_token_len(mut self, n: usize) -> Self {
        self.min_token_len = n;
        self
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }
}

impl Tokenizer for LangConfig {
    /// Lowercases, splits on anything that is not alphanumeric, then drops
    /// short tokens, purely numeric tokens and stopwords.
    fn tokenize(&self, text: &str) -> Vec<String> {
        text.to_lowercase()
            .split(|c: char| !c.is_alphanumeric())
            .filter(|t| t.chars().count() >= self.min_token_len.max(1))
            .filter(|t| !t.chars().all(char::is_numeric))
            .filter(|t| !self.stopwords.contains(*t))
            .map(str::to_owned)
            .collect()
    }
}
