use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{IngestError, PageId, PageIndex};

/// Directed hyperlinks, sorted, without duplicates or self-loops.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    edges: Vec<(PageId, PageId)>,
}

impl EdgeList {
    /// Normalizes arbitrary pairs: drops self-loops and duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (PageId, PageId)>) -> Self {
        let set: BTreeSet<_> = pairs.into_iter().filter(|(s, t)| s != t).collect();
        EdgeList {
            edges: set.into_iter().collect(),
        }
    }

    pub fn as_slice(&self) -> &[(PageId, PageId)] {
        &self.edges
    }

    pub fn iter(&self) -> impl Iterator<Item = (PageId, PageId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeLoad {
    pub edges: EdgeList,
    /// Lines naming a title absent from the index.
    pub skipped: usize,
}

/// Loads a `source<TAB>target` title file, resolving titles through `index`.
pub fn load_edges(path: &Path, index: &PageIndex) -> Result<EdgeLoad, IngestError> {
    let file = File::open(path).map_err(|e| IngestError::io(path, e))?;
    parse_edges(BufReader::new(file), index, path)
}

pub fn parse_edges(
    reader: impl BufRead,
    index: &PageIndex,
    origin: &Path,
) -> Result<EdgeLoad, IngestError> {
    let mut pairs = Vec::new();
    let mut skipped = 0;
    for_each_pair(reader, origin, |src, dst| {
        match (index.id(src), index.id(dst)) {
            (Some(s), Some(t)) => pairs.push((s, t)),
            _ => skipped += 1,
        }
    })?;
    Ok(EdgeLoad {
        edges: EdgeList::from_pairs(pairs),
        skipped,
    })
}

/// Sorted set of every title mentioned in an edge file.
pub fn read_edge_titles(path: &Path) -> Result<Vec<String>, IngestError> {
    let file = File::open(path).map_err(|e| IngestError::io(path, e))?;
    let mut titles = BTreeSet::new();
    for_each_pair(BufReader::new(file), path, |src, dst| {
        titles.insert(src.to_owned());
        titles.insert(dst.to_owned());
    })?;
    Ok(titles.into_iter().collect())
}

fn for_each_pair(
    reader: impl BufRead,
    origin: &Path,
    mut f: impl FnMut(&str, &str),
) -> Result<(), IngestError> {
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| IngestError::io(origin, e))?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let Some((src, dst)) = line.split_once('\t') else {
            return Err(IngestError::Parse {
                path: origin.to_path_buf(),
                line_no: i + 1,
                reason: "missing tab separator".into(),
            });
        };
        f(src, dst);
    }
    Ok(())
}
