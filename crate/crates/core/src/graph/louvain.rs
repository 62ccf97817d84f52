//! Two-phase Louvain: greedy local moves, then aggregation of communities
//! into super-nodes, repeated while modularity improves.
//!
//! Nodes are swept in ascending id order and candidate communities are
//! scanned in ascending id order, so the result is fully deterministic.

use std::collections::BTreeMap;

use super::{modularity_with_resolution, GraphConfig, GraphError, Partition, TrendGraph};
use crate::scalar::Real;

const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LouvainOutcome<F> {
    pub partition: Partition,
    /// Modularity of the starting singletons followed by each accepted pass.
    pub pass_modularity: Vec<F>,
}

/// Weighted undirected graph on dense node ids; internal weight of a
/// super-node is kept as a self-loop.
struct Level<F> {
    adj: Vec<Vec<(usize, F)>>,
    strength: Vec<F>,
}

impl<F: Real> Level<F> {
    fn from_graph(graph: &TrendGraph<F>) -> Self {
        let n = graph.len();
        let mut adj = vec![Vec::new(); n];
        let mut strength = vec![F::zero(); n];
        for (a, b, w) in graph.edges() {
            let (i, j) = (graph.position(a).unwrap(), graph.position(b).unwrap());
            adj[i].push((j, w));
            adj[j].push((i, w));
            strength[i] = strength[i] + w;
            strength[j] = strength[j] + w;
        }
        Level { adj, strength }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Local moving phase. Returns the community of each node and whether
    /// any node moved.
    fn local_moves(&self, resolution: F) -> (Vec<usize>, bool) {
        let n = self.len();
        let two_m: F = self.strength.iter().copied().sum();
        let mut community: Vec<usize> = (0..n).collect();
        if two_m == F::zero() {
            return (community, false);
        }
        let mut total: Vec<F> = self.strength.clone();
        let mut link_to = vec![F::zero(); n];
        let mut touched: Vec<usize> = Vec::new();
        let mut is_touched = vec![false; n];
        let min_gain = F::of(MIN_GAIN);
        let mut moved_any = false;
        loop {
            let mut moved = false;
            for i in 0..n {
                let own = community[i];
                let k_i = self.strength[i];
                for &(j, w) in &self.adj[i] {
                    if j == i {
                        continue;
                    }
                    let c = community[j];
                    if !is_touched[c] {
                        is_touched[c] = true;
                        touched.push(c);
                    }
                    link_to[c] = link_to[c] + w;
                }
                total[own] = total[own] - k_i;
                let gain = |c: usize, link: F| link - resolution * total[c] * k_i / two_m;
                let mut best = own;
                let mut best_gain = gain(own, link_to[own]);
                touched.sort_unstable();
                for &c in &touched {
                    if c == own {
                        continue;
                    }
                    let g = gain(c, link_to[c]);
                    if g > best_gain + min_gain {
                        best = c;
                        best_gain = g;
                    }
                }
                total[best] = total[best] + k_i;
                community[i] = best;
                if best != own {
                    moved = true;
                    moved_any = true;
                }
                for &c in &touched {
                    link_to[c] = F::zero();
                    is_touched[c] = false;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
        }
        (community, moved_any)
    }

    /// Collapses communities into nodes; returns the new level and the dense
    /// relabeling of `community` (first-seen order).
    fn aggregate(&self, community: &[usize]) -> (Level<F>, Vec<usize>) {
        let mut dense: BTreeMap<usize, usize> = BTreeMap::new();
        let mut order = Vec::new();
        for &c in community {
            if let std::collections::btree_map::Entry::Vacant(e) = dense.entry(c) {
                e.insert(order.len());
                order.push(c);
            }
        }
        let relabel: Vec<usize> = community.iter().map(|c| dense[c]).collect();
        let k = order.len();
        let mut weights: Vec<BTreeMap<usize, F>> = vec![BTreeMap::new(); k];
        let mut strength = vec![F::zero(); k];
        for i in 0..self.len() {
            let ci = relabel[i];
            strength[ci] = strength[ci] + self.strength[i];
            for &(j, w) in &self.adj[i] {
                let cj = relabel[j];
                let e = weights[ci].entry(cj).or_insert(F::zero());
                *e = *e + w;
            }
        }
        let adj = weights
            .into_iter()
            .map(|row| row.into_iter().collect())
            .collect();
        (Level { adj, strength }, relabel)
    }
}

/// Runs Louvain and marks clusters smaller than `min_cluster_size` filtered.
pub fn louvain<F: Real>(graph: &TrendGraph<F>, config: &GraphConfig<F>) -> Result<Partition, GraphError> {
    louvain_traced(graph, config).map(|o| o.partition)
}

pub fn louvain_traced<F: Real>(
    graph: &TrendGraph<F>,
    config: &GraphConfig<F>,
) -> Result<LouvainOutcome<F>, GraphError> {
    if graph.is_empty() {
        return Err(GraphError::EmptyGraph);
    }
    let resolution = config.resolution;
    let n = graph.len();
    // membership of every original node in the current level's node ids
    let mut membership: Vec<usize> = (0..n).collect();
    let to_partition = |m: &[usize]| {
        Partition::from_labels(graph.nodes().iter().copied().zip(m.iter().copied()))
    };
    let mut best = to_partition(&membership);
    let mut best_q = modularity_with_resolution(graph, &best, resolution)?;
    let mut trace = vec![best_q];
    let mut level = Level::from_graph(graph);
    loop {
        let (community, moved) = level.local_moves(resolution);
        if !moved {
            break;
        }
        let (next, relabel) = level.aggregate(&community);
        let candidate_membership: Vec<usize> = membership.iter().map(|&m| relabel[m]).collect();
        let candidate = to_partition(&candidate_membership);
        let q = modularity_with_resolution(graph, &candidate, resolution)?;
        if q <= best_q + F::of(MIN_GAIN) {
            break;
        }
        membership = candidate_membership;
        best = candidate;
        best_q = q;
        trace.push(q);
        level = next;
    }
    Ok(LouvainOutcome {
        partition: best.with_min_cluster_size(config.min_cluster_size),
        pass_modularity: trace,
    })
}
