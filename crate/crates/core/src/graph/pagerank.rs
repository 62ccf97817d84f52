use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{GraphConfig, GraphError, Partition, TrendGraph};
use crate::ingest::PageId;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct PageRank<F> {
    pub scores: BTreeMap<PageId, F>,
    pub iterations: usize,
}

/// Power iteration over the hyperlinks among `members`, with uniform
/// teleport and dangling mass spread uniformly. Stops once the L1 change
/// drops below `tol` or after `max_iter` steps.
pub fn pagerank<F: Real>(graph: &TrendGraph<F>, members: &[PageId], config: &GraphConfig<F>) -> PageRank<F> {
    let mut nodes: Vec<PageId> = members.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    let n = nodes.len();
    if n == 0 {
        return PageRank {
            scores: BTreeMap::new(),
            iterations: 0,
        };
    }
    let pos = |p: PageId| nodes.binary_search(&p).ok();
    let mut out_degree = vec![0usize; n];
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, t) in graph.arcs() {
        if let (Some(i), Some(j)) = (pos(s), pos(t)) {
            out_degree[i] += 1;
            incoming[j].push(i);
        }
    }
    let nf = F::from_usize(n).expect("size fits");
    let d = config.damping;
    let teleport = (F::one() - d) / nf;
    let mut x = vec![F::one() / nf; n];
    let mut next = vec![F::zero(); n];
    let mut iterations = 0;
    while iterations < config.max_iter {
        iterations += 1;
        let dangling: F = (0..n).filter(|&i| out_degree[i] == 0).map(|i| x[i]).sum();
        let base = teleport + d * dangling / nf;
        for j in 0..n {
            let flow: F = incoming[j]
                .iter()
                .map(|&i| x[i] / F::from_usize(out_degree[i]).unwrap())
                .sum();
            next[j] = base + d * flow;
        }
        let change: F = x.iter().zip(&next).map(|(a, b)| (*a - *b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if change < config.tol {
            break;
        }
    }
    PageRank {
        scores: nodes.into_iter().zip(x).collect(),
        iterations,
    }
}

/// PageRank of every cluster, computed in parallel, keyed by cluster id.
pub fn pagerank_clusters<F: Real>(
    graph: &TrendGraph<F>,
    partition: &Partition,
    config: &GraphConfig<F>,
) -> BTreeMap<usize, PageRank<F>> {
    partition
        .clusters()
        .into_par_iter()
        .enumerate()
        .map(|(c, members)| (c, pagerank(graph, &members, config)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Member with the highest score; ties go to the smallest id. Members
/// without a score count as zero.
pub fn central_page<F: Real>(members: &[PageId], scores: &BTreeMap<PageId, F>) -> Result<PageId, GraphError> {
    let mut sorted: Vec<PageId> = members.to_vec();
    sorted.sort_unstable();
    let mut best: Option<(PageId, F)> = None;
    for p in sorted {
        let s = scores.get(&p).copied().unwrap_or(F::zero());
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((p, s));
        }
    }
    best.map(|(p, _)| p).ok_or(GraphError::EmptyCluster)
}
