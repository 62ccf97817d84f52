use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::{undirected, GraphConfig, TrendGraph};
use crate::burst::BurstProfile;
use crate::ingest::{EdgeList, PageId, ViewMatrix};
use crate::scalar::Real;

fn union_hours(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

/// Clipped Pearson correlation of two raw series restricted to the union of
/// their burst hours. Zero when the union is shorter than
/// `min_overlap_hours` or either restricted series is constant.
pub fn edge_weight<F: Real>(
    p_series: &[u32],
    q_series: &[u32],
    p_burst: &BurstProfile<F>,
    q_burst: &BurstProfile<F>,
    config: &GraphConfig<F>,
) -> F {
    let hours = union_hours(&p_burst.burst_hours, &q_burst.burst_hours);
    if hours.len() < config.min_overlap_hours || hours.is_empty() {
        return F::zero();
    }
    let n = F::from_usize(hours.len()).expect("length fits");
    let val = |s: &[u32], h: usize| F::from_u32(s[h]).expect("count fits");
    let mean = |s: &[u32]| hours.iter().map(|&h| val(s, h)).sum::<F>() / n;
    let (mp, mq) = (mean(p_series), mean(q_series));
    let (mut cov, mut vp, mut vq) = (F::zero(), F::zero(), F::zero());
    for &h in &hours {
        let dp = val(p_series, h) - mp;
        let dq = val(q_series, h) - mq;
        cov = cov + dp * dq;
        vp = vp + dp * dp;
        vq = vq + dq * dq;
    }
    if vp == F::zero() || vq == F::zero() {
        return F::zero();
    }
    // sqrt(v * v) == v exactly, so identical series give exactly 1
    let r = cov / (vp * vq).sqrt();
    r.max(F::zero()).min(F::one())
}

/// Keeps every trending page as a node and every hyperlink between two
/// trending pages whose weight reaches `w_min` (and is positive).
pub fn build_trend_graph<F: Real>(
    matrix: &ViewMatrix,
    edges: &EdgeList,
    bursts: &BTreeMap<PageId, BurstProfile<F>>,
    config: &GraphConfig<F>,
) -> TrendGraph<F> {
    let candidates: BTreeSet<(PageId, PageId)> = edges
        .iter()
        .filter(|(s, t)| bursts.contains_key(s) && bursts.contains_key(t))
        .map(|(s, t)| undirected(s, t))
        .collect();
    let candidates: Vec<_> = candidates.into_iter().collect();
    let retained: BTreeMap<(PageId, PageId), F> = candidates
        .par_iter()
        .map(|&(a, b)| {
            let w = edge_weight(matrix.row(a), matrix.row(b), &bursts[&a], &bursts[&b], config);
            ((a, b), w)
        })
        .filter(|(_, w)| *w > F::zero() && *w >= config.w_min)
        .collect();

    let mut graph = TrendGraph::new(bursts.keys().copied());
    for (s, t) in edges.iter() {
        if let Some(&w) = retained.get(&undirected(s, t)) {
            graph.link(s, t, w).expect("weight in (0, 1] between trending nodes");
        }
    }
    graph
}
