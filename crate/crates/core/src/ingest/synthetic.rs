//! Planted-partition fixture: clusters of hyperlinked pages sharing a burst.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::{EdgeList, IngestError, PageId, PageIndex, ViewMatrix};

/// 2018-09-01T00:00Z in hours since the epoch.
pub const SYNTHETIC_START_HOUR: i64 = 426_600;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_clusters: usize,
    pub pages_per_cluster: usize,
    pub n_noise_pages: usize,
    pub t_hours: usize,
    pub baseline_rate: f64,
    pub burst_magnitude: f64,
    pub intra_cluster_edge_prob: f64,
    pub inter_cluster_edge_prob: f64,
    pub seed: u64,
    /// Seeds burst placement and shape separately from counts and edges, so
    /// several editions can share one event schedule. Defaults to `seed`.
    #[serde(default)]
    pub schedule_seed: Option<u64>,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_clusters: 3,
            pages_per_cluster: 20,
            n_noise_pages: 500,
            t_hours: 1344,
            baseline_rate: 20.0,
            burst_magnitude: 50.0,
            intra_cluster_edge_prob: 0.3,
            inter_cluster_edge_prob: 0.002,
            seed: 42,
            schedule_seed: None,
        }
    }
}

/// Hour offsets `[start, start + len)` of one planted burst.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BurstWindow {
    pub cluster: usize,
    pub start: usize,
    pub len: usize,
}

impl BurstWindow {
    pub fn contains(&self, hour: usize) -> bool {
        (self.start..self.start + self.len).contains(&hour)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub matrix: ViewMatrix,
    pub edges: EdgeList,
    /// Cluster pages only; noise pages are absent.
    pub planted: BTreeMap<PageId, usize>,
    pub windows: Vec<BurstWindow>,
}

const MIN_BURST: usize = 6;
const MAX_BURST: usize = 24;

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), IngestError> {
        let bad = |m: &str| Err(IngestError::InvalidSpec(m.into()));
        if self.t_hours == 0 {
            return bad("t_hours must be positive");
        }
        if self.n_clusters > 0 && self.pages_per_cluster == 0 {
            return bad("pages_per_cluster must be positive");
        }
        if self.n_clusters * self.pages_per_cluster + self.n_noise_pages == 0 {
            return bad("no pages");
        }
        if !(self.baseline_rate > 0.0 && self.baseline_rate.is_finite()) {
            return bad("baseline_rate must be positive");
        }
        if !(self.burst_magnitude > 0.0 && self.burst_magnitude.is_finite()) {
            return bad("burst_magnitude must be positive");
        }
        for p in [self.intra_cluster_edge_prob, self.inter_cluster_edge_prob] {
            if !(0.0..=1.0).contains(&p) {
                return bad("edge probabilities must lie in [0, 1]");
            }
        }
        if self.n_clusters > 0 && self.slot_width() < MIN_BURST {
            return bad("second half of the range is too short for one 6 h burst per cluster");
        }
        Ok(())
    }

    fn slot_width(&self) -> usize {
        (self.t_hours - self.t_hours / 2) / self.n_clusters.max(1)
    }

    pub fn n_pages(&self) -> usize {
        self.n_clusters * self.pages_per_cluster + self.n_noise_pages
    }
}

/// Generates counts, hyperlinks and the planted partition.
///
/// Cluster `c` bursts inside the `c`-th of `n_clusters` equal slots covering
/// the second half of the range, so a trailing baseline window of up to
/// `t_hours / 2` is always available. Burst amplitude ramps from 0.3 to 1.0
/// of `burst_magnitude × baseline_rate` with shared hourly jitter.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticData, IngestError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut sched = ChaCha8Rng::seed_from_u64(spec.schedule_seed.unwrap_or(spec.seed) ^ 0x5EED_B0057);

    let half = spec.t_hours / 2;
    let slot = spec.slot_width();
    let mut windows = Vec::with_capacity(spec.n_clusters);
    let mut shapes = Vec::with_capacity(spec.n_clusters);
    for c in 0..spec.n_clusters {
        let len = sched.random_range(MIN_BURST..=MAX_BURST.min(slot));
        let slot_start = half + c * slot;
        let start = sched.random_range(slot_start..=slot_start + slot - len);
        let shape: Vec<f64> = (0..len)
            .map(|k| (0.3 + 0.7 * (k + 1) as f64 / len as f64) * sched.random_range(0.9..1.1))
            .collect();
        windows.push(BurstWindow { cluster: c, start, len });
        shapes.push(shape);
    }

    let n_cluster_pages = spec.n_clusters * spec.pages_per_cluster;
    let n_pages = spec.n_pages();
    let width = n_pages.to_string().len();
    let titles = (0..n_pages).map(|p| {
        if p < n_cluster_pages {
            format!("Cluster{}_Page{:0width$}", p / spec.pages_per_cluster, p)
        } else {
            format!("Noise_Page{:0width$}", p)
        }
    });
    let index = PageIndex::from_titles("synthetic", titles);
    let mut matrix = ViewMatrix::zeros(index, SYNTHETIC_START_HOUR, spec.t_hours)?;

    let baseline = Poisson::new(spec.baseline_rate).expect("validated rate");
    let mut planted = BTreeMap::new();
    for p in 0..n_pages {
        let page = PageId(p as u32);
        let cluster = (p < n_cluster_pages).then(|| p / spec.pages_per_cluster);
        let row = matrix.row_mut(page);
        for cell in row.iter_mut() {
            *cell = baseline.sample(&mut rng) as u32;
        }
        if let Some(c) = cluster {
            planted.insert(page, c);
            let amp = rng.random_range(0.7..1.3);
            let w = windows[c];
            for (k, s) in shapes[c].iter().enumerate() {
                let lambda = spec.burst_magnitude * spec.baseline_rate * s * amp;
                let extra = Poisson::new(lambda).expect("positive burst rate").sample(&mut rng);
                row[w.start + k] = row[w.start + k].saturating_add(extra as u32);
            }
        }
    }

    let cluster_of = |p: usize| (p < n_cluster_pages).then(|| p / spec.pages_per_cluster);
    let mut pairs = Vec::new();
    for s in 0..n_pages {
        for t in 0..n_pages {
            if s == t {
                continue;
            }
            let same = matches!((cluster_of(s), cluster_of(t)), (Some(a), Some(b)) if a == b);
            let prob = if same {
                spec.intra_cluster_edge_prob
            } else {
                spec.inter_cluster_edge_prob
            };
            if rng.random_bool(prob) {
                pairs.push((PageId(s as u32), PageId(t as u32)));
            }
        }
    }

    Ok(SyntheticData {
        matrix,
        edges: EdgeList::from_pairs(pairs),
        planted,
        windows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SyntheticSpec {
        SyntheticSpec {
            n_clusters: 2,
            pages_per_cluster: 5,
            n_noise_pages: 10,
            t_hours: 400,
            ..Default::default()
        }
    }

    #[test]
    fn start_hour_constant() {
        assert_eq!(SYNTHETIC_START_HOUR * 3600, 1_535_760_000);
    }

    #[test]
    fn no_clusters_means_all_noise() {
        let spec = SyntheticSpec {
            n_clusters: 0,
            ..small()
        };
        let d = generate_synthetic(&spec).unwrap();
        assert!(d.planted.is_empty());
        assert!(d.windows.is_empty());
        assert_eq!(d.matrix.n_pages(), 10);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_synthetic(&small()).unwrap();
        let b = generate_synthetic(&small()).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic(&SyntheticSpec { seed: 7, ..small() }).unwrap();
        assert_ne!(a.matrix, c.matrix);
    }

    #[test]
    fn schedule_seed_shares_windows() {
        let a = generate_synthetic(&SyntheticSpec { seed: 1, schedule_seed: Some(9), ..small() }).unwrap();
        let b = generate_synthetic(&SyntheticSpec { seed: 2, schedule_seed: Some(9), ..small() }).unwrap();
        assert_eq!(a.windows, b.windows);
        assert_ne!(a.matrix, b.matrix);
    }

    #[test]
    fn windows_in_second_half_and_in_own_slot() {
        let spec = SyntheticSpec::default();
        let d = generate_synthetic(&spec).unwrap();
        let slot = (spec.t_hours - spec.t_hours / 2) / spec.n_clusters;
        for w in &d.windows {
            let lo = spec.t_hours / 2 + w.cluster * slot;
            assert!(w.start >= lo && w.start + w.len <= lo + slot);
            assert!((6..=24).contains(&w.len));
        }
        assert_eq!(d.planted.len(), 60);
        // burst hours dominate baseline
        let p = PageId(0);
        let w = d.windows[0];
        let peak = d.matrix.row(p)[w.start..w.start + w.len].iter().max().copied().unwrap();
        assert!(peak > 300, "peak {peak}");
    }

    #[test]
    fn rejects_invalid_specs() {
        for spec in [
            SyntheticSpec { t_hours: 0, ..small() },
            SyntheticSpec { intra_cluster_edge_prob: 1.5, ..small() },
            SyntheticSpec { baseline_rate: 0.0, ..small() },
            SyntheticSpec { pages_per_cluster: 0, ..small() },
            SyntheticSpec { t_hours: 20, ..small() },
        ] {
            assert!(matches!(generate_synthetic(&spec), Err(IngestError::InvalidSpec(_))));
        }
    }
}
