//! Correlation-weighted subnetwork of trending pages, community detection
//! and in-cluster centrality.

mod build;
mod louvain;
mod modularity;
mod pagerank;
mod partition;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ingest::PageId;
use crate::scalar::Real;

pub use build::{build_trend_graph, edge_weight};
pub use louvain::{louvain, louvain_traced, LouvainOutcome};
pub use modularity::{modularity, modularity_with_resolution};
pub use pagerank::{central_page, pagerank, pagerank_clusters, PageRank};
pub use partition::Partition;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("cluster has no pages")]
    EmptyCluster,
    #[error("edge weight {0} outside (0, 1]")]
    BadWeight(f64),
    #[error("unknown node {0}")]
    UnknownNode(PageId),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GraphConfig<F> {
    /// Minimum burst correlation for a hyperlink to be retained.
    pub w_min: F,
    pub min_overlap_hours: usize,
    pub damping: F,
    /// L1 convergence tolerance for PageRank.
    pub tol: F,
    pub max_iter: usize,
    pub min_cluster_size: usize,
    pub resolution: F,
}

impl<F: Real> Default for GraphConfig<F> {
    fn default() -> Self {
        GraphConfig {
            w_min: F::of(0.5),
            min_overlap_hours: 6,
            damping: F::of(0.85),
            tol: F::of(1e-9),
            max_iter: 100,
            min_cluster_size: 5,
            resolution: F::one(),
        }
    }
}

impl<F: Real> GraphConfig<F> {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.w_min >= F::zero() && self.w_min <= F::one()) {
            return Err("w_min must lie in [0, 1]".into());
        }
        if !(self.damping > F::zero() && self.damping < F::one()) {
            return Err("damping must lie in (0, 1)".into());
        }
        if self.tol.is_nan() || self.tol <= F::zero() {
            return Err("tol must be positive".into());
        }
        if self.resolution.is_nan() || self.resolution <= F::zero() {
            return Err("resolution must be positive".into());
        }
        Ok(())
    }
}

/// Trending pages joined by retained hyperlinks.
///
/// Weights live on the undirected pair `(min, max)`; the directed hyperlinks
/// behind each retained pair are kept for PageRank.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendGraph<F> {
    nodes: Vec<PageId>,
    weights: BTreeMap<(PageId, PageId), F>,
    arcs: BTreeSet<(PageId, PageId)>,
    degree: Vec<usize>,
}

impl<F: Real> TrendGraph<F> {
    /// Graph with the given nodes and no edges.
    pub fn new(nodes: impl IntoIterator<Item = PageId>) -> Self {
        let set: BTreeSet<PageId> = nodes.into_iter().collect();
        let nodes: Vec<PageId> = set.into_iter().collect();
        let degree = vec![0; nodes.len()];
        TrendGraph {
            nodes,
            weights: BTreeMap::new(),
            arcs: BTreeSet::new(),
            degree,
        }
    }

    /// Records the hyperlink `source → target` with undirected weight `w`.
    /// A second link over the same pair overwrites the weight.
    pub fn link(&mut self, source: PageId, target: PageId, w: F) -> Result<(), GraphError> {
        if !(w > F::zero() && w <= F::one()) {
            return Err(GraphError::BadWeight(w.as_f64()));
        }
        for p in [source, target] {
            if self.position(p).is_none() {
                return Err(GraphError::UnknownNode(p));
            }
        }
        if source == target {
            return Err(GraphError::InvalidPartition("self-loop".into()));
        }
        let key = undirected(source, target);
        if self.weights.insert(key, w).is_none() {
            let (a, b) = (self.position(key.0).unwrap(), self.position(key.1).unwrap());
            self.degree[a] += 1;
            self.degree[b] += 1;
        }
        self.arcs.insert((source, target));
        Ok(())
    }

    pub fn nodes(&self) -> &[PageId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, p: PageId) -> bool {
        self.position(p).is_some()
    }

    pub(crate) fn position(&self, p: PageId) -> Option<usize> {
        self.nodes.binary_search(&p).ok()
    }

    /// Number of retained undirected edges incident to `p`.
    pub fn degree(&self, p: PageId) -> Option<usize> {
        self.position(p).map(|i| self.degree[i])
    }

    pub fn weight(&self, a: PageId, b: PageId) -> Option<F> {
        self.weights.get(&undirected(a, b)).copied()
    }

    /// Undirected edges `(min, max, w)` in key order.
    pub fn edges(&self) -> impl Iterator<Item = (PageId, PageId, F)> + '_ {
        self.weights.iter().map(|(&(a, b), &w)| (a, b, w))
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    /// Directed hyperlinks behind the retained edges.
    pub fn arcs(&self) -> impl Iterator<Item = (PageId, PageId)> + '_ {
        self.arcs.iter().copied()
    }
}

pub(crate) fn undirected(a: PageId, b: PageId) -> (PageId, PageId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
