//! Per-page viewership burst detection with a trailing-window z-score.
//!
//! Hour `t` is a burst when `(x[t] - mean) / (std + eps) >= z_threshold` and
//! `x[t] >= min_views`, where mean and population std are taken over the
//! trailing window `[t - W, t)`. Hours before `W` are never bursts.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ingest::{PageId, ViewMatrix};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BurstError {
    #[error("series has {len} hours, window needs at least {window}")]
    SeriesTooShort { len: usize, window: usize },
    #[error("invalid burst config: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BurstConfig<F> {
    pub window_hours: usize,
    pub z_threshold: F,
    pub min_views: u32,
    pub epsilon: F,
}

impl<F: Real> Default for BurstConfig<F> {
    fn default() -> Self {
        BurstConfig {
            window_hours: 168,
            z_threshold: F::of(3.0),
            min_views: 100,
            epsilon: F::of(1e-9),
        }
    }
}

impl<F: Real> BurstConfig<F> {
    pub fn validate(&self) -> Result<(), BurstError> {
        if self.window_hours < 2 {
            return Err(BurstError::InvalidConfig("window_hours must be at least 2"));
        }
        if self.z_threshold.is_nan() || self.z_threshold <= F::zero() {
            return Err(BurstError::InvalidConfig("z_threshold must be positive"));
        }
        if self.epsilon.is_nan() || self.epsilon <= F::zero() {
            return Err(BurstError::InvalidConfig("epsilon must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurstProfile<F> {
    pub page_id: PageId,
    /// Sorted hour offsets into the series.
    pub burst_hours: Vec<usize>,
    /// z-score of each burst hour, parallel to `burst_hours`.
    pub z_scores: Vec<F>,
    /// Burst hour with maximal z, earliest on ties.
    pub peak_hour: Option<usize>,
}

impl<F> BurstProfile<F> {
    pub fn is_empty(&self) -> bool {
        self.burst_hours.is_empty()
    }
}

/// Trailing-window mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStats<F> {
    pub mean: F,
    pub std: F,
}

/// Statistics for every hour `t >= window` (element `i` describes hour
/// `window + i`).
///
/// Window sums are kept as exact integers, so the result does not depend on
/// the order in which hours enter and leave the window.
pub fn rolling_stats<F: Real>(series: &[u32], window: usize) -> Result<Vec<WindowStats<F>>, BurstError> {
    if window == 0 || series.len() < window {
        return Err(BurstError::SeriesTooShort {
            len: series.len(),
            window,
        });
    }
    let w = window as u128;
    let mut sum: u128 = series[..window].iter().map(|&x| x as u128).sum();
    let mut sum_sq: u128 = series[..window].iter().map(|&x| (x as u128) * (x as u128)).sum();
    let wf = F::from_u128(w).expect("window fits");
    let mut out = Vec::with_capacity(series.len() - window);
    for t in window..series.len() {
        // W^2 var = W * sum_sq - sum^2, exact and non-negative
        let scaled_var = w * sum_sq - sum * sum;
        let mean = F::from_u128(sum).expect("sum fits") / wf;
        let std = F::from_u128(scaled_var).expect("variance fits").sqrt() / wf;
        out.push(WindowStats { mean, std });
        let (enter, leave) = (series[t] as u128, series[t - window] as u128);
        sum = sum + enter - leave;
        sum_sq = sum_sq + enter * enter - leave * leave;
    }
    Ok(out)
}

pub fn detect_bursts<F: Real>(
    page_id: PageId,
    series: &[u32],
    config: &BurstConfig<F>,
) -> Result<BurstProfile<F>, BurstError> {
    config.validate()?;
    let stats = rolling_stats::<F>(series, config.window_hours)?;
    let mut burst_hours = Vec::new();
    let mut z_scores = Vec::new();
    let mut peak: Option<(usize, F)> = None;
    for (i, st) in stats.iter().enumerate() {
        let t = config.window_hours + i;
        let x = series[t];
        if x < config.min_views {
            continue;
        }
        let z = (F::from_u32(x).expect("count fits") - st.mean) / (st.std + config.epsilon);
        if z >= config.z_threshold {
            burst_hours.push(t);
            z_scores.push(z);
            if peak.is_none_or(|(_, best)| z > best) {
                peak = Some((t, z));
            }
        }
    }
    Ok(BurstProfile {
        page_id,
        burst_hours,
        z_scores,
        peak_hour: peak.map(|(t, _)| t),
    })
}

/// Runs [`detect_bursts`] on every row (in parallel) and keeps pages with at
/// least one burst.
pub fn trending_pages<F: Real>(
    matrix: &ViewMatrix,
    config: &BurstConfig<F>,
) -> Result<BTreeMap<PageId, BurstProfile<F>>, BurstError> {
    config.validate()?;
    if matrix.n_hours() < config.window_hours {
        return Err(BurstError::SeriesTooShort {
            len: matrix.n_hours(),
            window: config.window_hours,
        });
    }
    let rows: Vec<(PageId, &[u32])> = matrix.rows().collect();
    let profiles = rows
        .into_par_iter()
        .map(|(p, row)| detect_bursts(p, row, config))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(profiles
        .into_iter()
        .filter(|b| !b.is_empty())
        .map(|b| (b.page_id, b))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PageIndex;
    use proptest::prelude::*;
    use wikitrends_oracles::burst::brute_force_bursts;

    fn cfg(window: usize, z: f64, min_views: u32) -> BurstConfig<f64> {
        BurstConfig {
            window_hours: window,
            z_threshold: z,
            min_views,
            epsilon: 1e-9,
        }
    }

    #[test]
    fn constant_series_has_zero_std() {
        let s = vec![5u32; 20];
        for w in [2, 7, 20] {
            for st in rolling_stats::<f64>(&s, w).unwrap() {
                assert_eq!((st.mean, st.std), (5.0, 0.0));
            }
        }
    }

    #[test]
    fn zero_series() {
        let st = rolling_stats::<f64>(&[0, 0, 0, 0], 2).unwrap();
        assert_eq!(st.len(), 2);
        assert!(st.iter().all(|s| s.mean == 0.0 && s.std == 0.0));
    }

    #[test]
    fn direct_formula_at_t4() {
        let st = rolling_stats::<f64>(&[1, 2, 3, 4, 5], 3).unwrap();
        // hour 4 uses hours 1..4 = [2, 3, 4]
        assert_eq!(st[1].mean, 3.0);
        assert!((st[1].std - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn too_short() {
        assert_eq!(
            rolling_stats::<f64>(&[1, 2], 3),
            Err(BurstError::SeriesTooShort { len: 2, window: 3 })
        );
        assert!(detect_bursts(PageId(0), &[1u32; 10], &BurstConfig::<f64>::default()).is_err());
    }

    #[test]
    fn constant_series_never_bursts() {
        let b = detect_bursts(PageId(0), &[500u32; 400], &BurstConfig::<f64>::default()).unwrap();
        assert!(b.is_empty());
        assert_eq!(b.peak_hour, None);
    }

    #[test]
    fn single_spike_after_flat_week() {
        let mut s = vec![10u32; 168];
        s.push(1000);
        let b = detect_bursts(PageId(3), &s, &cfg(168, 3.0, 100)).unwrap();
        assert_eq!(b.burst_hours, vec![168]);
        assert_eq!(b.peak_hour, Some(168));
        assert!((b.z_scores[0] - 990.0 / 1e-9).abs() / (990.0 / 1e-9) < 1e-12);
    }

    #[test]
    fn floor_suppresses_small_spikes() {
        let mut s = vec![1u32; 168];
        s.push(50);
        assert!(detect_bursts(PageId(0), &s, &cfg(168, 3.0, 100)).unwrap().is_empty());
    }

    #[test]
    fn f32_agrees_on_clear_spike() {
        let mut s = vec![10u32; 30];
        s.push(900);
        let c = BurstConfig::<f32> {
            window_hours: 24,
            ..Default::default()
        };
        assert_eq!(detect_bursts(PageId(0), &s, &c).unwrap().burst_hours, vec![30]);
    }

    #[test]
    fn peak_ties_go_to_earliest() {
        // two identical spikes separated by more than a window
        let mut s = vec![10u32; 10];
        s.push(1000);
        s.extend(vec![10; 10]);
        s.push(1000);
        let b = detect_bursts(PageId(0), &s, &cfg(4, 3.0, 100)).unwrap();
        assert_eq!(b.burst_hours, vec![10, 21]);
        assert_eq!(b.z_scores[0], b.z_scores[1]);
        assert_eq!(b.peak_hour, Some(10));
    }

    #[test]
    fn scaling_with_nonzero_std_keeps_bursts() {
        // std > 0 everywhere: z is scale invariant, only the floor can differ
        let s: Vec<u32> = (0..60).map(|i| 10 + (i % 3) as u32 * 2).chain([200]).collect();
        let c = cfg(8, 3.0, 0);
        let base = detect_bursts(PageId(0), &s, &c).unwrap();
        let scaled: Vec<u32> = s.iter().map(|x| x * 4).collect();
        let big = detect_bursts(PageId(0), &scaled, &c).unwrap();
        assert_eq!(base.burst_hours, big.burst_hours);
        for (a, b) in base.z_scores.iter().zip(&big.z_scores) {
            assert!((a - b).abs() < 1e-9 * a.abs());
        }
        // floor branch: the unscaled spike sits below v_min, the scaled one above
        let c = cfg(8, 3.0, 500);
        assert!(detect_bursts(PageId(0), &s, &c).unwrap().is_empty());
        assert_eq!(detect_bursts(PageId(0), &scaled, &c).unwrap().burst_hours, vec![60]);
    }

    #[test]
    fn trending_pages_keeps_only_bursting_rows() {
        let idx = PageIndex::from_titles("en", ["Flat", "Spiky", "Zero"]);
        let mut counts = vec![20u32; 200];
        let mut spiky = vec![20u32; 200];
        spiky[190] = 2000;
        counts.extend(spiky);
        counts.extend(vec![0u32; 200]);
        let m = ViewMatrix::from_rows(idx.clone(), 0, 200, counts).unwrap();
        let got = trending_pages(&m, &BurstConfig::<f64>::default()).unwrap();
        assert_eq!(got.keys().copied().collect::<Vec<_>>(), vec![PageId(1)]);

        let zero = ViewMatrix::zeros(idx, 0, 200).unwrap();
        assert!(trending_pages(&zero, &BurstConfig::<f64>::default()).unwrap().is_empty());
    }

    #[test]
    fn one_planted_page_in_synthetic_matrix() {
        use crate::ingest::{generate_synthetic, SyntheticSpec};
        let d = generate_synthetic(&SyntheticSpec {
            n_clusters: 1,
            pages_per_cluster: 1,
            n_noise_pages: 40,
            t_hours: 400,
            ..Default::default()
        })
        .unwrap();
        let got = trending_pages(&d.matrix, &BurstConfig::<f64>::default()).unwrap();
        assert_eq!(got.keys().copied().collect::<Vec<_>>(), vec![PageId(0)]);
        let w = d.windows[0];
        assert!(got[&PageId(0)].burst_hours.iter().all(|&h| w.contains(h)));
    }

    #[test]
    fn invalid_config() {
        let idx = PageIndex::from_titles("en", ["A"]);
        let m = ViewMatrix::zeros(idx, 0, 10).unwrap();
        let c = BurstConfig::<f64> {
            window_hours: 1,
            ..Default::default()
        };
        assert!(matches!(trending_pages(&m, &c), Err(BurstError::InvalidConfig(_))));
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            series in proptest::collection::vec(0u32..=1_000_000, 2..300),
            w in 2usize..40,
            z in 0.5f64..5.0,
            floor in 0u32..2000,
        ) {
            prop_assume!(series.len() >= w);
            let c = cfg(w, z, floor);
            let got = detect_bursts(PageId(0), &series, &c).unwrap();
            let oracle = brute_force_bursts(&series, w, z, floor as u64, 1e-9);
            prop_assert_eq!(&got.burst_hours, &oracle.iter().map(|b| b.0).collect::<Vec<_>>());
        }

        #[test]
        fn raising_threshold_never_adds(
            series in proptest::collection::vec(0u32..5000, 30..120),
            z in 0.5f64..4.0,
            dz in 0.0f64..3.0,
        ) {
            let lo = detect_bursts(PageId(0), &series, &cfg(10, z, 0)).unwrap();
            let hi = detect_bursts(PageId(0), &series, &cfg(10, z + dz, 0)).unwrap();
            prop_assert!(hi.burst_hours.iter().all(|h| lo.burst_hours.contains(h)));
        }

        #[test]
        fn profile_invariants(series in proptest::collection::vec(0u32..3000, 20..100)) {
            let c = cfg(6, 2.0, 50);
            let b = detect_bursts(PageId(0), &series, &c).unwrap();
            for (h, z) in b.burst_hours.iter().zip(&b.z_scores) {
                prop_assert!(*z >= 2.0 && series[*h] >= 50);
            }
            prop_assert_eq!(b.peak_hour.is_some(), !b.is_empty());
            if let Some(p) = b.peak_hour {
                prop_assert!(b.burst_hours.contains(&p));
            }
        }
    }
}
