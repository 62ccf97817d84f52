use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{ClusterDoc, TextError};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct KeywordConfig {
    /// Keywords kept per cluster.
    pub k: usize,
}

impl Default for KeywordConfig {
    fn default() -> Self {
        KeywordConfig { k: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Keyword<F> {
    pub token: String,
    pub score: F,
}

/// Ranked keywords per cluster id.
pub type KeywordScores<F> = BTreeMap<usize, Vec<Keyword<F>>>;

/// Top-`k` tokens of every doc by `tf × ln(N / df)`, where `tf` is the
/// degree-weighted count and `df` counts cluster docs containing the token.
///
/// Tokens scoring zero (present in every doc) are never reported. Ties are
/// broken by token order.
pub fn tfidf_keywords<F: Real>(docs: &[ClusterDoc], cfg: &KeywordConfig) -> Result<KeywordScores<F>, TextError> {
    if cfg.k == 0 {
        return Err(TextError::InvalidKeywordConfig);
    }
    if docs.is_empty() {
        return Err(TextError::EmptyCorpus);
    }
    let mut df: HashMap<&str, u64> = HashMap::new();
    for d in docs {
        for t in d.term_counts.keys() {
            *df.entry(t.as_str()).or_default() += 1;
        }
    }
    let n_docs = F::from_usize(docs.len()).expect("doc count fits");
    let mut out = BTreeMap::new();
    for d in docs {
        let total = F::from_count(d.total().max(1));
        // rank key = (tf / total) · idf: the same order as tf · idf inside one
        // doc, and bit-identical when all degrees are scaled by a constant
        let mut ranked: Vec<(F, &str, F)> = d
            .term_counts
            .iter()
            .filter_map(|(t, &c)| {
                let idf = (n_docs / F::from_count(df[t.as_str()])).ln();
                let tf = F::from_count(c);
                let score = tf * idf;
                (score > F::zero()).then(|| ((tf / total) * idf, t.as_str(), score))
            })
            .collect();
        ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal).then_with(|| a.1.cmp(b.1)));
        ranked.truncate(cfg.k);
        out.insert(
            d.cluster,
            ranked
                .into_iter()
                .map(|(_, t, score)| Keyword {
                    token: t.to_owned(),
                    score,
                })
                .collect(),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PageId;
    use proptest::prelude::*;

    fn doc(cluster: usize, pairs: &[(&str, u64)]) -> ClusterDoc {
        ClusterDoc {
            cluster,
            term_counts: pairs.iter().map(|(t, c)| (t.to_string(), *c)).collect(),
            source_pages: Vec::new(),
        }
    }

    #[test]
    fn hand_evaluated_pair() {
        let docs = [doc(0, &[("x", 4), ("y", 1)]), doc(1, &[("y", 3)])];
        let kw = tfidf_keywords::<f64>(&docs, &KeywordConfig::default()).unwrap();
        assert_eq!(kw[&0].len(), 1);
        assert_eq!(kw[&0][0].token, "x");
        assert!((kw[&0][0].score - 4.0 * 2f64.ln()).abs() < 1e-15);
        assert!(kw[&1].is_empty());
    }

    #[test]
    fn corpus_wide_tokens_never_ranked() {
        let docs = [doc(0, &[("the", 100), ("cat", 1)]), doc(1, &[("the", 50), ("dog", 2)])];
        let kw = tfidf_keywords::<f64>(&docs, &KeywordConfig::default()).unwrap();
        assert!(kw.values().flatten().all(|k| k.token != "the"));
    }

    #[test]
    fn ties_are_lexicographic_and_k_truncates() {
        let docs = [doc(0, &[("b", 2), ("a", 2), ("c", 1)]), doc(1, &[("z", 1)])];
        let kw = tfidf_keywords::<f64>(&docs, &KeywordConfig { k: 2 }).unwrap();
        let toks: Vec<_> = kw[&0].iter().map(|k| k.token.as_str()).collect();
        assert_eq!(toks, vec!["a", "b"]);
    }

    #[test]
    fn errors() {
        assert!(matches!(tfidf_keywords::<f64>(&[], &KeywordConfig::default()), Err(TextError::EmptyCorpus)));
        assert!(matches!(
            tfidf_keywords::<f64>(&[doc(0, &[])], &KeywordConfig { k: 0 }),
            Err(TextError::InvalidKeywordConfig)
        ));
    }

    #[test]
    fn doubling_degree_doubles_tf_only() {
        let tokens: Vec<String> = ["goal", "match"].iter().map(|s| s.to_string()).collect();
        let other: Vec<String> = vec!["vote".into()];
        let mk = |deg| {
            vec![
                ClusterDoc::from_pages(0, [(PageId(0), deg, tokens.as_slice())]),
                ClusterDoc::from_pages(1, [(PageId(1), 1, other.as_slice())]),
            ]
        };
        let a = tfidf_keywords::<f64>(&mk(1), &KeywordConfig::default()).unwrap();
        let b = tfidf_keywords::<f64>(&mk(2), &KeywordConfig::default()).unwrap();
        for (x, y) in a[&0].iter().zip(&b[&0]) {
            assert_eq!(x.token, y.token);
            assert_eq!(y.score, 2.0 * x.score);
        }
    }

    #[test]
    fn f32_scores() {
        let docs = [doc(0, &[("x", 4)]), doc(1, &[("y", 3)])];
        let kw = tfidf_keywords::<f32>(&docs, &KeywordConfig::default()).unwrap();
        assert!((kw[&0][0].score - 4.0 * 2f32.ln()).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn degree_scaling_keeps_rankings(
            pages in proptest::collection::vec((0usize..4, 1usize..6, proptest::collection::vec(0usize..12, 0..15)), 1..20),
            c in 2usize..7,
        ) {
            let vocab: Vec<String> = (0..12).map(|i| format!("w{i:02}")).collect();
            let build = |scale: usize| -> Vec<ClusterDoc> {
                (0..4).map(|cl| {
                    let toks: Vec<(PageId, usize, Vec<String>)> = pages.iter().enumerate()
                        .filter(|(_, p)| p.0 == cl)
                        .map(|(i, p)| (PageId(i as u32), p.1 * scale, p.2.iter().map(|&w| vocab[w].clone()).collect()))
                        .collect();
                    ClusterDoc::from_pages(cl, toks.iter().map(|(p, d, t)| (*p, *d, t.as_slice())))
                }).collect()
            };
            let a = tfidf_keywords::<f64>(&build(1), &KeywordConfig { k: 5 }).unwrap();
            let b = tfidf_keywords::<f64>(&build(c), &KeywordConfig { k: 5 }).unwrap();
            for cl in 0..4 {
                let ta: Vec<_> = a[&cl].iter().map(|k| &k.token).collect();
                let tb: Vec<_> = b[&cl].iter().map(|k| &k.token).collect();
                prop_assert_eq!(ta, tb);
            }
        }
    }
}
