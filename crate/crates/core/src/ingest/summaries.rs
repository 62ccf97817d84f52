use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use super::{IngestError, PageId, PageIndex};

/// Article summaries keyed by page id. Pages without an entry have no summary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SummaryStore {
    texts: BTreeMap<PageId, String>,
}

impl SummaryStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, page: PageId, text: impl Into<String>) {
        self.texts.insert(page, text.into());
    }

    pub fn get(&self, page: PageId) -> Option<&str> {
        self.texts.get(&page).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (PageId, &str)> {
        self.texts.iter().map(|(&p, s)| (p, s.as_str()))
    }

    pub fn len(&self) -> usize {
        self.texts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.texts.is_empty()
    }
}

#[derive(Deserialize)]
struct SummaryLine {
    id: Option<u32>,
    title: Option<String>,
    #[serde(default)]
    summary: String,
}

/// Loads a JSONL file of `{"id": n, "summary": ...}` or
/// `{"title": "...", "summary": ...}` objects. Entries that do not resolve
/// to a page of `index` are skipped; the skip count is returned alongside.
pub fn load_summaries(path: &Path, index: &PageIndex) -> Result<(SummaryStore, usize), IngestError> {
    let file = File::open(path).map_err(|e| IngestError::io(path, e))?;
    let mut store = SummaryStore::new();
    let mut skipped = 0;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| IngestError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: SummaryLine = serde_json::from_str(&line).map_err(|e| IngestError::Parse {
            path: path.to_path_buf(),
            line_no: i + 1,
            reason: e.to_string(),
        })?;
        let page = match (parsed.id, parsed.title.as_deref()) {
            (Some(id), _) if (id as usize) < index.len() => Some(PageId(id)),
            (None, Some(t)) => index.id(t),
            _ => None,
        };
        match page {
            Some(p) => store.insert(p, parsed.summary),
            None => skipped += 1,
        }
    }
    Ok((store, skipped))
}
