use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Tokenizer;
use crate::graph::{Partition, TrendGraph};
use crate::ingest::{PageId, SummaryStore};
use crate::scalar::Real;

/// Concatenated summaries of one cluster, each page's counts multiplied by
/// its trend-graph degree (at least 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterDoc {
    pub cluster: usize,
    pub term_counts: BTreeMap<String, u64>,
    /// Every member page with its degree `n`.
    pub source_pages: Vec<(PageId, usize)>,
}

impl ClusterDoc {
    pub fn total(&self) -> u64 {
        self.term_counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.term_counts.is_empty()
    }

    /// Builds a doc from per-page token lists and degrees.
    pub fn from_pages<'a>(cluster: usize, pages: impl IntoIterator<Item = (PageId, usize, &'a [String])>) -> Self {
        let mut term_counts = BTreeMap::new();
        let mut source_pages = Vec::new();
        for (page, degree, tokens) in pages {
            source_pages.push((page, degree));
            let mult = degree.max(1) as u64;
            for t in tokens {
                *term_counts.entry(t.clone()).or_insert(0) += mult;
            }
        }
        ClusterDoc {
            cluster,
            term_counts,
            source_pages,
        }
    }
}

/// One document per non-filtered cluster, in cluster order. Pages without a
/// summary contribute nothing.
pub fn build_cluster_docs<F: Real>(
    partition: &Partition,
    summaries: &SummaryStore,
    graph: &TrendGraph<F>,
    tokenizer: &dyn Tokenizer,
) -> Vec<ClusterDoc> {
    let clusters = partition.clusters();
    partition
        .active_clusters()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|c| {
            let pages: Vec<(PageId, usize, Vec<String>)> = clusters[c]
                .iter()
                .map(|&p| {
                    let tokens = match summaries.get(p) {
                        Some(text) => tokenizer.tokenize(text),
                        None => {
                            log::debug!("page {p} has no summary");
                            Vec::new()
                        }
                    };
                    (p, graph.degree(p).unwrap_or(0), tokens)
                })
                .collect();
            ClusterDoc::from_pages(c, pages.iter().map(|(p, d, t)| (*p, *d, t.as_slice())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::LangConfig;

    fn star(center: u32, leaves: &[u32]) -> TrendGraph<f64> {
        let mut g = TrendGraph::new(std::iter::once(center).chain(leaves.iter().copied()).map(PageId));
        for &l in leaves {
            g.link(PageId(center), PageId(l), 0.9).unwrap();
        }
        g
    }

    fn counts(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
        pairs.iter().map(|(t, c)| (t.to_string(), *c)).collect()
    }

    #[test]
    fn degree_multiplies_counts() {
        let g = star(0, &[1, 2, 3]);
        let p = Partition::from_labels([(PageId(0), 0), (PageId(1), 1), (PageId(2), 1), (PageId(3), 1)]);
        let mut s = SummaryStore::new();
        s.insert(PageId(0), "cat cat dog");
        let tok = LangConfig::new("en", Vec::<&str>::new());
        let docs = build_cluster_docs(&p, &s, &g, &tok);
        assert_eq!(docs[0].term_counts, counts(&[("cat", 6), ("dog", 3)]));
        assert!(docs[1].is_empty());
        assert_eq!(docs[1].source_pages.len(), 3);
    }

    #[test]
    fn isolated_page_uses_multiplier_one() {
        let g = TrendGraph::<f64>::new([PageId(0)]);
        let p = Partition::from_labels([(PageId(0), 0)]);
        let mut s = SummaryStore::new();
        s.insert(PageId(0), "cat dog");
        let docs = build_cluster_docs(&p, &s, &g, &LangConfig::new("en", Vec::<&str>::new()));
        assert_eq!(docs[0].term_counts, counts(&[("cat", 1), ("dog", 1)]));
    }

    #[test]
    fn weighted_sum_over_pages() {
        // degrees 1 and 2: page 0 - page 1 - page 2, cluster {0, 1}
        let mut g = TrendGraph::<f64>::new((0..3).map(PageId));
        g.link(PageId(0), PageId(1), 0.8).unwrap();
        g.link(PageId(1), PageId(2), 0.8).unwrap();
        let p = Partition::from_labels([(PageId(0), 0), (PageId(1), 0), (PageId(2), 1)]);
        let mut s = SummaryStore::new();
        s.insert(PageId(0), "aa bb");
        s.insert(PageId(1), "bb");
        let docs = build_cluster_docs(&p, &s, &g, &LangConfig::new("en", Vec::<&str>::new()));
        assert_eq!(docs[0].term_counts, counts(&[("aa", 1), ("bb", 3)]));
    }

    #[test]
    fn filtered_clusters_skipped() {
        let g = TrendGraph::<f64>::new((0..3).map(PageId));
        let p = Partition::from_labels([(PageId(0), 0), (PageId(1), 0), (PageId(2), 1)]).with_min_cluster_size(2);
        let docs = build_cluster_docs(&p, &SummaryStore::new(), &g, &LangConfig::new("en", Vec::<&str>::new()));
        assert_eq!(docs.iter().map(|d| d.cluster).collect::<Vec<_>>(), vec![0]);
    }
}
