use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::GraphError;
use crate::ingest::PageId;

/// Total assignment of graph nodes to dense cluster ids. Clusters below the
/// minimum size stay in the assignment but are marked filtered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assignment: BTreeMap<PageId, usize>,
    n_clusters: usize,
    filtered: BTreeSet<usize>,
}

impl Partition {
    /// Validates that cluster ids are exactly `0..k`.
    pub fn new(assignment: BTreeMap<PageId, usize>) -> Result<Self, GraphError> {
        let used: BTreeSet<usize> = assignment.values().copied().collect();
        let n_clusters = used.len();
        if used.iter().copied().ne(0..n_clusters) {
            return Err(GraphError::InvalidPartition(
                "cluster ids are not contiguous from 0".into(),
            ));
        }
        Ok(Partition {
            assignment,
            n_clusters,
            filtered: BTreeSet::new(),
        })
    }

    /// Relabels arbitrary labels densely in order of each label's smallest page.
    pub fn from_labels(labels: impl IntoIterator<Item = (PageId, usize)>) -> Self {
        let raw: BTreeMap<PageId, usize> = labels.into_iter().collect();
        let mut dense = BTreeMap::new();
        let assignment = raw
            .into_iter()
            .map(|(p, l)| {
                let next = dense.len();
                (p, *dense.entry(l).or_insert(next))
            })
            .collect();
        Partition::new(assignment).expect("dense by construction")
    }

    /// Marks clusters with fewer than `min_size` members as filtered.
    pub fn with_min_cluster_size(mut self, min_size: usize) -> Self {
        let sizes = self.sizes();
        self.filtered = (0..self.n_clusters).filter(|&c| sizes[c] < min_size).collect();
        self
    }

    pub fn with_filtered(mut self, filtered: BTreeSet<usize>) -> Result<Self, GraphError> {
        if filtered.iter().any(|&c| c >= self.n_clusters) {
            return Err(GraphError::InvalidPartition("filtered id out of range".into()));
        }
        self.filtered = filtered;
        Ok(self)
    }

    pub fn cluster_of(&self, p: PageId) -> Option<usize> {
        self.assignment.get(&p).copied()
    }

    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn is_filtered(&self, c: usize) -> bool {
        self.filtered.contains(&c)
    }

    pub fn filtered(&self) -> &BTreeSet<usize> {
        &self.filtered
    }

    /// Clusters that feed downstream trend extraction.
    pub fn active_clusters(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_clusters).filter(|c| !self.filtered.contains(c))
    }

    pub fn assignment(&self) -> &BTreeMap<PageId, usize> {
        &self.assignment
    }

    /// Members of each cluster, ascending.
    pub fn clusters(&self) -> Vec<Vec<PageId>> {
        let mut out = vec![Vec::new(); self.n_clusters];
        for (&p, &c) in &self.assignment {
            out[c].push(p);
        }
        out
    }

    pub fn members(&self, c: usize) -> Vec<PageId> {
        self.assignment
            .iter()
            .filter(|(_, &k)| k == c)
            .map(|(&p, _)| p)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.n_clusters];
        for &c in self.assignment.values() {
            s[c] += 1;
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabels_densely() {
        let p = Partition::from_labels([(PageId(5), 9), (PageId(1), 4), (PageId(3), 9)]);
        assert_eq!(p.cluster_of(PageId(1)), Some(0));
        assert_eq!(p.cluster_of(PageId(3)), Some(1));
        assert_eq!(p.members(1), vec![PageId(3), PageId(5)]);
        assert_eq!(p.n_clusters(), 2);
    }

    #[test]
    fn rejects_gaps() {
        let m = BTreeMap::from([(PageId(0), 0), (PageId(1), 2)]);
        assert!(Partition::new(m).is_err());
    }

    #[test]
    fn min_size_filter() {
        let p = Partition::from_labels([(PageId(0), 0), (PageId(1), 0), (PageId(2), 1)])
            .with_min_cluster_size(2);
        assert!(p.is_filtered(1) && !p.is_filtered(0));
        assert_eq!(p.active_clusters().collect::<Vec<_>>(), vec![0]);
        assert_eq!(p.len(), 3);
    }
}
