use serde::{Deserialize, Serialize};

use super::Trend;
use crate::label::Label;

pub const DEFAULT_DELTA_HOURS: u64 = 48;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlignedTrend {
    pub language: String,
    pub trend_id: String,
}

/// Groups of same-label trends whose absolute peaks lie pairwise within
/// `delta_hours`. Singleton groups are trends unique to one language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendAlignment {
    pub delta_hours: u64,
    pub groups: Vec<Vec<AlignedTrend>>,
}

impl TrendAlignment {
    pub fn shared(&self) -> impl Iterator<Item = &[AlignedTrend]> {
        self.groups.iter().filter(|g| g.len() > 1).map(Vec::as_slice)
    }

    pub fn unique(&self) -> impl Iterator<Item = &AlignedTrend> {
        self.groups.iter().filter(|g| g.len() == 1).map(|g| &g[0])
    }
}

/// Greedy alignment: trends are visited by absolute peak hour (then
/// language, then id) and each joins the earliest group with its label
/// whose every member peaks within `delta_hours`, or opens a new group.
pub fn align_trends<F>(languages: &[Vec<Trend<F>>], delta_hours: u64) -> TrendAlignment {
    if languages.len() < 2 {
        log::warn!("aligning {} language(s); every group will be single-language", languages.len());
    }
    let mut all: Vec<&Trend<F>> = languages.iter().flatten().collect();
    all.sort_by(|a, b| {
        a.absolute_peak()
            .cmp(&b.absolute_peak())
            .then_with(|| a.language.cmp(&b.language))
            .then_with(|| a.id.cmp(&b.id))
    });
    let delta = delta_hours as i64;
    let mut groups: Vec<(Label, Vec<&Trend<F>>)> = Vec::new();
    for t in all {
        let peak = t.absolute_peak();
        let slot = groups
            .iter_mut()
            .find(|(l, g)| *l == t.label && g.iter().all(|m| (m.absolute_peak() - peak).abs() <= delta));
        match slot {
            Some((_, g)) => g.push(t),
            None => groups.push((t.label, vec![t])),
        }
    }
    TrendAlignment {
        delta_hours,
        groups: groups
            .into_iter()
            .map(|(_, g)| {
                g.into_iter()
                    .map(|t| AlignedTrend {
                        language: t.language.clone(),
                        trend_id: t.id.clone(),
                    })
                    .collect()
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PageId;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn trend(lang: &str, n: usize, label: Label, peak: i64) -> Trend<f64> {
        Trend {
            id: format!("{lang}-{n}"),
            language: lang.into(),
            cluster: n,
            members: vec![PageId(0)],
            central_page: PageId(0),
            label,
            keywords: vec![],
            series: vec![],
            peak_hour: 0,
            start_hour: peak,
        }
    }

    #[test]
    fn close_peaks_group() {
        let a = align_trends(&[vec![trend("en", 0, Label::Music, 100)], vec![trend("fr", 0, Label::Music, 110)]], 48);
        assert_eq!(a.groups.len(), 1);
        assert_eq!(a.shared().count(), 1);
    }

    #[test]
    fn far_peaks_split() {
        let a = align_trends(&[vec![trend("en", 0, Label::Music, 100)], vec![trend("fr", 0, Label::Music, 180)]], 48);
        assert_eq!(a.groups.len(), 2);
        assert_eq!(a.unique().count(), 2);
    }

    #[test]
    fn labels_split() {
        let a = align_trends(&[vec![trend("en", 0, Label::Music, 100)], vec![trend("fr", 0, Label::Movies, 100)]], 48);
        assert_eq!(a.groups.len(), 2);
    }

    #[test]
    fn pairwise_not_chained() {
        // 0 and 40 group; 80 is within 48 of 40 but not of 0
        let a = align_trends(
            &[
                vec![trend("en", 0, Label::Music, 0)],
                vec![trend("fr", 0, Label::Music, 40)],
                vec![trend("ru", 0, Label::Music, 80)],
            ],
            48,
        );
        assert_eq!(a.groups.len(), 2);
        assert_eq!(a.groups[0].len(), 2);
        assert_eq!(a.groups[1][0].language, "ru");
    }

    proptest! {
        #[test]
        fn groups_partition_the_trends(peaks in proptest::collection::vec((0usize..3, 0usize..3, 0i64..500), 0..40)) {
            let langs = ["en", "fr", "ru"];
            let mut per: Vec<Vec<Trend<f64>>> = vec![vec![]; 3];
            for (i, &(l, lab, peak)) in peaks.iter().enumerate() {
                per[l].push(trend(langs[l], i, Label::ALL[lab], peak));
            }
            let a = align_trends(&per, 48);
            let mut seen = BTreeSet::new();
            for g in &a.groups {
                for m in g {
                    prop_assert!(seen.insert((m.language.clone(), m.trend_id.clone())));
                }
                let ts: Vec<&Trend<f64>> = g.iter().map(|m| per.iter().flatten().find(|t| t.id == m.trend_id).unwrap()).collect();
                for x in &ts {
                    prop_assert_eq!(x.label, ts[0].label);
                    for y in &ts {
                        prop_assert!((x.absolute_peak() - y.absolute_peak()).abs() <= 48);
                    }
                }
            }
            prop_assert_eq!(seen.len(), peaks.len());
        }
    }
}
