use std::collections::BTreeMap;

use chrono::DateTime;
use serde::{Deserialize, Serialize};

use super::ReportError;
use crate::graph::{central_page, PageRank, Partition};
use crate::ingest::{PageId, ViewMatrix};
use crate::label::Label;
use crate::scalar::{round6, Real};
use crate::text::{Keyword, KeywordScores};

/// One trending topic: a labeled cluster with its summed view series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trend<F> {
    /// `{language}-{cluster}-{stamp}`, where the stamp is the first analyzed
    /// hour, so ids are stable across reruns over the same range.
    pub id: String,
    pub language: String,
    pub cluster: usize,
    /// Sorted by id.
    pub members: Vec<PageId>,
    pub central_page: PageId,
    pub label: Label,
    pub keywords: Vec<Keyword<F>>,
    /// Hourly views summed over members.
    pub series: Vec<u64>,
    /// Offset of the first maximum of `series`.
    pub peak_hour: usize,
    /// Absolute hour (since the epoch) of `series[0]`.
    pub start_hour: i64,
}

impl<F> Trend<F> {
    pub fn absolute_peak(&self) -> i64 {
        self.start_hour + self.peak_hour as i64
    }

    pub fn max_views(&self) -> u64 {
        self.series.get(self.peak_hour).copied().unwrap_or(0)
    }
}

/// Compact UTC stamp for an absolute hour, e.g. `20180916T14`.
pub fn hour_stamp(hour: i64) -> String {
    DateTime::from_timestamp(hour * 3600, 0)
        .map(|t| t.format("%Y%m%dT%H").to_string())
        .unwrap_or_else(|| format!("h{hour}"))
}

fn first_argmax(series: &[u64]) -> usize {
    let mut best = 0;
    for (i, &v) in series.iter().enumerate() {
        if v > series[best] {
            best = i;
        }
    }
    best
}

/// One trend per non-filtered cluster, ordered by descending peak views
/// (ties by cluster id). Keyword scores are rounded to six decimals so the
/// exported trends read back unchanged.
pub fn assemble_trends<F: Real>(
    partition: &Partition,
    matrix: &ViewMatrix,
    pageranks: &BTreeMap<usize, PageRank<F>>,
    keywords: &KeywordScores<F>,
    labels: &BTreeMap<usize, Label>,
) -> Result<Vec<Trend<F>>, ReportError> {
    let language = matrix.index().language().to_owned();
    let stamp = hour_stamp(matrix.start_hour());
    let clusters = partition.clusters();
    let mut trends = Vec::new();
    for c in partition.active_clusters() {
        let members = clusters[c].clone();
        let mut series = vec![0u64; matrix.n_hours()];
        for &p in &members {
            if p.index() >= matrix.n_pages() {
                return Err(ReportError::InconsistentInputs(format!("page {p} of cluster {c} is not in the view matrix")));
            }
            for (s, &v) in series.iter_mut().zip(matrix.row(p)) {
                *s += u64::from(v);
            }
        }
        let pr = pageranks
            .get(&c)
            .ok_or_else(|| ReportError::InconsistentInputs(format!("no PageRank for cluster {c}")))?;
        let central = central_page(&members, &pr.scores).map_err(|e| ReportError::InconsistentInputs(e.to_string()))?;
        let label = *labels
            .get(&c)
            .ok_or_else(|| ReportError::InconsistentInputs(format!("cluster {c} has no label")))?;
        let keywords = keywords
            .get(&c)
            .map(|ks| {
                ks.iter()
                    .map(|k| Keyword {
                        token: k.token.clone(),
                        score: F::of(round6(k.score.as_f64())),
                    })
                    .collect()
            })
            .unwrap_or_default();
        trends.push(Trend {
            id: format!("{language}-{c}-{stamp}"),
            language: language.clone(),
            cluster: c,
            peak_hour: first_argmax(&series),
            members,
            central_page: central,
            label,
            keywords,
            series,
            start_hour: matrix.start_hour(),
        });
    }
    trends.sort_by(|a, b| b.max_views().cmp(&a.max_views()).then(a.cluster.cmp(&b.cluster)));
    Ok(trends)
}

/// Topic histogram over trends. Cluster counts are the primary measure;
/// member-page counts are reported alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicDistribution<F> {
    pub counts: BTreeMap<Label, usize>,
    pub shares: BTreeMap<Label, F>,
    pub page_counts: BTreeMap<Label, usize>,
}

pub fn topic_distribution<F: Real>(trends: &[Trend<F>]) -> Result<TopicDistribution<F>, ReportError> {
    if trends.is_empty() {
        return Err(ReportError::NoTrends);
    }
    let mut counts = BTreeMap::new();
    let mut page_counts = BTreeMap::new();
    for t in trends {
        *counts.entry(t.label).or_insert(0) += 1;
        *page_counts.entry(t.label).or_insert(0) += t.members.len();
    }
    let n = F::from_usize(trends.len()).unwrap();
    let shares = counts.iter().map(|(&l, &c)| (l, F::from_usize(c).unwrap() / n)).collect();
    Ok(TopicDistribution {
        counts,
        shares,
        page_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PageIndex;

    fn fixture() -> (Partition, ViewMatrix, BTreeMap<usize, PageRank<f64>>, BTreeMap<usize, Label>) {
        let index = PageIndex::from_titles("en", ["A", "B", "C", "D"]);
        let m = ViewMatrix::from_rows(index, 100, 3, vec![1, 5, 2, 0, 1, 9, 3, 3, 3, 7, 0, 0]).unwrap();
        let p = Partition::new(BTreeMap::from([
            (PageId(0), 0),
            (PageId(1), 0),
            (PageId(2), 1),
            (PageId(3), 2),
        ]))
        .unwrap();
        let pr = |pairs: &[(u32, f64)]| PageRank {
            scores: pairs.iter().map(|&(p, s)| (PageId(p), s)).collect(),
            iterations: 1,
        };
        let prs = BTreeMap::from([(0, pr(&[(0, 0.3), (1, 0.7)])), (1, pr(&[(2, 1.0)])), (2, pr(&[(3, 1.0)]))]);
        let labels = BTreeMap::from([(0, Label::Music), (1, Label::Music), (2, Label::Sports)]);
        (p, m, prs, labels)
    }

    #[test]
    fn series_peaks_and_order() {
        let (p, m, prs, labels) = fixture();
        let kw = BTreeMap::from([(0, vec![Keyword { token: "x".into(), score: 1.0 / 3.0 }])]);
        let trends = assemble_trends(&p, &m, &prs, &kw, &labels).unwrap();
        assert_eq!(trends.iter().map(|t| t.cluster).collect::<Vec<_>>(), [0, 2, 1]);
        let t0 = &trends[0];
        assert_eq!(t0.series, [1, 6, 11]);
        assert_eq!(t0.peak_hour, 2);
        assert_eq!(t0.central_page, PageId(1));
        assert_eq!(t0.keywords[0].score, 0.333333);
        // singleton cluster series is the page's row
        assert_eq!(trends[2].series, [3, 3, 3]);
        assert_eq!(trends[2].peak_hour, 0);
        assert!(trends[2].keywords.is_empty());
        let total: u64 = trends.iter().flat_map(|t| &t.series).sum();
        assert!(total <= m.total());
        assert_eq!(t0.id, format!("en-0-{}", hour_stamp(100)));
    }

    #[test]
    fn filtered_clusters_have_no_trend() {
        let (p, m, prs, labels) = fixture();
        let p = p.with_min_cluster_size(2);
        let trends = assemble_trends(&p, &m, &prs, &BTreeMap::new(), &labels).unwrap();
        assert_eq!(trends.len(), 1);
    }

    #[test]
    fn inconsistent_inputs() {
        let (_, m, prs, labels) = fixture();
        let p = Partition::new(BTreeMap::from([(PageId(9), 0)])).unwrap();
        let err = assemble_trends(&p, &m, &prs, &BTreeMap::new(), &labels).unwrap_err();
        assert!(matches!(err, ReportError::InconsistentInputs(_)));
        let (p, m, prs, _) = fixture();
        let err = assemble_trends(&p, &m, &prs, &BTreeMap::new(), &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, ReportError::InconsistentInputs(_)));
    }

    #[test]
    fn distribution() {
        let (p, m, prs, mut labels) = fixture();
        labels.insert(1, Label::Music);
        let trends = assemble_trends(&p, &m, &prs, &BTreeMap::new(), &labels).unwrap();
        let d = topic_distribution(&trends).unwrap();
        assert_eq!(d.counts, BTreeMap::from([(Label::Music, 2), (Label::Sports, 1)]));
        assert_eq!(d.page_counts, BTreeMap::from([(Label::Music, 3), (Label::Sports, 1)]));
        assert!((d.shares[&Label::Music] - 2.0 / 3.0).abs() < 1e-15);
        assert!((d.shares.values().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(matches!(topic_distribution::<f64>(&[]), Err(ReportError::NoTrends)));
    }
}
