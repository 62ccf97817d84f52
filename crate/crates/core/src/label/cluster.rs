use std::collections::BTreeMap;

use super::{Classifier, Label, LabelError};
use crate::graph::Partition;
use crate::ingest::PageId;
use crate::text::ClusterDoc;

/// Labels every non-filtered cluster by the plurality of its members' page
/// labels. Ties go to the tied label the model scores highest on the
/// cluster document; clusters without labeled pages take the model's
/// prediction outright.
pub fn label_clusters(
    partition: &Partition,
    page_labels: &BTreeMap<PageId, Label>,
    docs: &[ClusterDoc],
    model: &dyn Classifier,
) -> Result<BTreeMap<usize, Label>, LabelError> {
    let docs: BTreeMap<usize, &ClusterDoc> = docs.iter().map(|d| (d.cluster, d)).collect();
    let clusters = partition.clusters();
    let mut out = BTreeMap::new();
    for c in partition.active_clusters() {
        let mut votes = [0usize; 9];
        for p in &clusters[c] {
            if let Some(l) = page_labels.get(p) {
                votes[l.index()] += 1;
            }
        }
        let top = *votes.iter().max().unwrap();
        let doc = docs.get(&c).copied();
        let label = if top == 0 {
            match doc {
                Some(d) if !d.is_empty() => model.predict_counts(&d.term_counts).label,
                _ => return Err(LabelError::UnlabelableCluster(c)),
            }
        } else {
            let tied: Vec<Label> = Label::ALL.into_iter().filter(|l| votes[l.index()] == top).collect();
            if tied.len() == 1 {
                tied[0]
            } else {
                let empty = BTreeMap::new();
                let scores = model.predict_counts(doc.map_or(&empty, |d| &d.term_counts)).scores;
                let score = |l: Label| scores.iter().find(|s| s.0 == l).map_or(f64::NEG_INFINITY, |s| s.1);
                let mut best = tied[0];
                for &l in &tied[1..] {
                    if score(l) > score(best) {
                        best = l;
                    }
                }
                best
            }
        };
        out.insert(c, label);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::train_classifier;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_owned).collect()
    }

    fn toy_model() -> crate::label::NaiveBayes {
        let mut data = Vec::new();
        for _ in 0..3 {
            data.push((toks("goal match"), Label::Football));
            data.push((toks("election vote"), Label::Politics));
            data.push((toks("song album"), Label::Music));
            data.push((toks("film actor"), Label::Movies));
        }
        train_classifier(&data, 1.0).unwrap()
    }

    fn one_cluster(n: u32) -> Partition {
        Partition::new((0..n).map(|i| (PageId(i), 0)).collect()).unwrap()
    }

    fn doc(cluster: usize, text: &str) -> ClusterDoc {
        let t = toks(text);
        ClusterDoc::from_pages(cluster, [(PageId(0), 1, t.as_slice())])
    }

    #[test]
    fn plurality_wins() {
        let p = one_cluster(3);
        let labels = BTreeMap::from([(PageId(0), Label::Music), (PageId(1), Label::Music), (PageId(2), Label::Movies)]);
        let out = label_clusters(&p, &labels, &[doc(0, "film actor film")], &toy_model()).unwrap();
        assert_eq!(out[&0], Label::Music);
    }

    #[test]
    fn unlabeled_cluster_uses_doc() {
        let p = one_cluster(3);
        let out = label_clusters(&p, &BTreeMap::new(), &[doc(0, "goal match stadium")], &toy_model()).unwrap();
        assert_eq!(out[&0], Label::Football);
    }

    #[test]
    fn tie_broken_by_doc() {
        let p = one_cluster(2);
        let labels = BTreeMap::from([(PageId(0), Label::Music), (PageId(1), Label::Movies)]);
        let m = toy_model();
        assert_eq!(label_clusters(&p, &labels, &[doc(0, "film actor")], &m).unwrap()[&0], Label::Movies);
        assert_eq!(label_clusters(&p, &labels, &[doc(0, "song album")], &m).unwrap()[&0], Label::Music);
    }

    #[test]
    fn unlabelable() {
        let p = one_cluster(2);
        let err = label_clusters(&p, &BTreeMap::new(), &[], &toy_model()).unwrap_err();
        assert!(matches!(err, LabelError::UnlabelableCluster(0)));
    }

    #[test]
    fn filtered_clusters_skipped() {
        let p = one_cluster(2).with_min_cluster_size(5);
        assert!(label_clusters(&p, &BTreeMap::new(), &[], &toy_model()).unwrap().is_empty());
    }
}
