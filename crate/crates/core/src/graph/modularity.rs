use super::{GraphError, Partition, TrendGraph};
use crate::scalar::Real;

/// Weighted modularity with resolution 1.
pub fn modularity<F: Real>(graph: &TrendGraph<F>, partition: &Partition) -> Result<F, GraphError> {
    modularity_with_resolution(graph, partition, F::one())
}

/// `Q = Σ_c [in_c / m - γ (tot_c / 2m)²]` where `in_c` is the weight inside
/// community `c` and `tot_c` its summed weighted degree.
///
/// `tot_c` is assembled as `2·in_c + cut_c`, and `in_c` is summed in the same
/// edge order as `m`, so a single community yields exactly zero.
pub fn modularity_with_resolution<F: Real>(
    graph: &TrendGraph<F>,
    partition: &Partition,
    resolution: F,
) -> Result<F, GraphError> {
    if graph.is_empty() {
        return Err(GraphError::EmptyGraph);
    }
    let k = partition.n_clusters();
    let cluster = |p| {
        partition
            .cluster_of(p)
            .ok_or_else(|| GraphError::InvalidPartition(format!("node {p} unassigned")))
    };
    for &p in graph.nodes() {
        cluster(p)?;
    }
    let mut m = F::zero();
    let mut inside = vec![F::zero(); k];
    let mut cut = vec![F::zero(); k];
    for (a, b, w) in graph.edges() {
        m = m + w;
        let (ca, cb) = (cluster(a)?, cluster(b)?);
        if ca == cb {
            inside[ca] = inside[ca] + w;
        } else {
            cut[ca] = cut[ca] + w;
            cut[cb] = cut[cb] + w;
        }
    }
    if m == F::zero() {
        return Ok(F::zero());
    }
    let two_m = m + m;
    let mut q = F::zero();
    for c in 0..k {
        let tot = inside[c] + inside[c] + cut[c];
        let frac = tot / two_m;
        q = q + inside[c] / m - resolution * frac * frac;
    }
    Ok(q)
}
