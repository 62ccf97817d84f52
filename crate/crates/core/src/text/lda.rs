//! Latent Dirichlet Allocation by collapsed Gibbs sampling.
//!
//! Degree-weighted counts are expanded into repeated token instances. Tokens
//! are visited in document order, and within a document in vocabulary order,
//! so a fixed seed reproduces the chain exactly.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ClusterDoc, TextError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LdaConfig {
    pub topics: usize,
    /// Document-topic prior; `50 / topics` when unset.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig {
            topics: 10,
            alpha: None,
            beta: 0.01,
            iterations: 1000,
            seed: 0,
        }
    }
}

impl LdaConfig {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.topics.max(1) as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    /// Sorted vocabulary; column `w` of `phi` is `vocab[w]`.
    pub vocab: Vec<String>,
    /// Cluster id of each row of `theta`.
    pub doc_clusters: Vec<usize>,
    /// topics × vocabulary
    pub phi: Vec<Vec<f64>>,
    /// documents × topics
    pub theta: Vec<Vec<f64>>,
    pub topic_word_counts: Vec<Vec<u32>>,
    pub doc_topic_counts: Vec<Vec<u32>>,
}

/// Sampler state; exposed so callers can inspect counts between sweeps.
pub struct GibbsState {
    cfg: LdaConfig,
    alpha: f64,
    vocab: Vec<String>,
    doc_clusters: Vec<usize>,
    /// word id of every token instance, per document
    words: Vec<Vec<u32>>,
    /// topic of every token instance, per document
    topics: Vec<Vec<u32>>,
    doc_topic: Vec<Vec<u32>>,
    topic_word: Vec<Vec<u32>>,
    topic_total: Vec<u64>,
    n_tokens: u64,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
    sweeps: usize,
}

impl GibbsState {
    pub fn new(docs: &[ClusterDoc], cfg: &LdaConfig) -> Result<Self, TextError> {
        if cfg.topics == 0 {
            return Err(TextError::InvalidK);
        }
        let vocab_set: BTreeMap<&str, u32> = docs
            .iter()
            .flat_map(|d| d.term_counts.keys().map(String::as_str))
            .map(|t| (t, 0))
            .collect();
        if vocab_set.is_empty() {
            return Err(TextError::EmptyCorpus);
        }
        let vocab: Vec<String> = vocab_set.keys().map(|s| s.to_string()).collect();
        let word_id: BTreeMap<&str, u32> = vocab.iter().enumerate().map(|(i, w)| (w.as_str(), i as u32)).collect();
        let k = cfg.topics;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut words = Vec::with_capacity(docs.len());
        let mut topics = Vec::with_capacity(docs.len());
        let mut doc_topic = vec![vec![0u32; k]; docs.len()];
        let mut topic_word = vec![vec![0u32; vocab.len()]; k];
        let mut topic_total = vec![0u64; k];
        let mut n_tokens = 0u64;
        for (d, doc) in docs.iter().enumerate() {
            let mut ws = Vec::new();
            let mut zs = Vec::new();
            for (t, &c) in &doc.term_counts {
                let w = word_id[t.as_str()];
                for _ in 0..c {
                    let z = rng.random_range(0..k as u32);
                    ws.push(w);
                    zs.push(z);
                    doc_topic[d][z as usize] += 1;
                    topic_word[z as usize][w as usize] += 1;
                    topic_total[z as usize] += 1;
                    n_tokens += 1;
                }
            }
            words.push(ws);
            topics.push(zs);
        }
        Ok(GibbsState {
            cfg: *cfg,
            alpha: cfg.alpha(),
            vocab,
            doc_clusters: docs.iter().map(|d| d.cluster).collect(),
            words,
            topics,
            doc_topic,
            topic_word,
            topic_total,
            n_tokens,
            rng,
            weights: vec![0.0; k],
            sweeps: 0,
        })
    }

    /// One full pass resampling every token's topic.
    pub fn sweep(&mut self) {
        let k = self.cfg.topics;
        let beta = self.cfg.beta;
        let v_beta = self.vocab.len() as f64 * beta;
        for d in 0..self.words.len() {
            for i in 0..self.words[d].len() {
                let w = self.words[d][i] as usize;
                let old = self.topics[d][i] as usize;
                self.doc_topic[d][old] -= 1;
                self.topic_word[old][w] -= 1;
                self.topic_total[old] -= 1;
                let mut total = 0.0;
                for t in 0..k {
                    let p = (self.doc_topic[d][t] as f64 + self.alpha) * (self.topic_word[t][w] as f64 + beta)
                        / (self.topic_total[t] as f64 + v_beta);
                    total += p;
                    self.weights[t] = total;
                }
                let u = self.rng.random::<f64>() * total;
                let new = self.weights.iter().position(|&c| u < c).unwrap_or(k - 1);
                self.topics[d][i] = new as u32;
                self.doc_topic[d][new] += 1;
                self.topic_word[new][w] += 1;
                self.topic_total[new] += 1;
            }
        }
        self.sweeps += 1;
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn n_tokens(&self) -> u64 {
        self.n_tokens
    }

    /// Recounts assignments from scratch and checks that topic-word counts,
    /// document-topic counts and per-topic totals all agree with them.
    pub fn check_conservation(&self) -> bool {
        let k = self.cfg.topics;
        let mut dt = vec![vec![0u32; k]; self.words.len()];
        let mut tw = vec![vec![0u32; self.vocab.len()]; k];
        for (d, (ws, zs)) in self.words.iter().zip(&self.topics).enumerate() {
            for (&w, &z) in ws.iter().zip(zs) {
                dt[d][z as usize] += 1;
                tw[z as usize][w as usize] += 1;
            }
        }
        let sum_tw: u64 = self.topic_word.iter().flatten().map(|&c| c as u64).sum();
        let sum_dt: u64 = self.doc_topic.iter().flatten().map(|&c| c as u64).sum();
        let totals_ok = self
            .topic_word
            .iter()
            .zip(&self.topic_total)
            .all(|(row, &t)| row.iter().map(|&c| c as u64).sum::<u64>() == t);
        dt == self.doc_topic && tw == self.topic_word && sum_tw == self.n_tokens && sum_dt == self.n_tokens && totals_ok
    }

    pub fn into_model(self) -> LdaModel {
        let k = self.cfg.topics;
        let beta = self.cfg.beta;
        let v = self.vocab.len();
        let phi = self
            .topic_word
            .iter()
            .zip(&self.topic_total)
            .map(|(row, &tot)| {
                let denom = tot as f64 + v as f64 * beta;
                row.iter().map(|&c| (c as f64 + beta) / denom).collect()
            })
            .collect();
        let theta = self
            .doc_topic
            .iter()
            .map(|row| {
                let n: u64 = row.iter().map(|&c| c as u64).sum();
                let denom = n as f64 + k as f64 * self.alpha;
                row.iter().map(|&c| (c as f64 + self.alpha) / denom).collect()
            })
            .collect();
        LdaModel {
            topics: k,
            alpha: self.alpha,
            beta,
            iterations: self.sweeps,
            seed: self.cfg.seed,
            vocab: self.vocab,
            doc_clusters: self.doc_clusters,
            phi,
            theta,
            topic_word_counts: self.topic_word,
            doc_topic_counts: self.doc_topic,
        }
    }
}

/// Fits LDA with `cfg.iterations` Gibbs sweeps.
pub fn lda_fit(docs: &[ClusterDoc], cfg: &LdaConfig) -> Result<LdaModel, TextError> {
    let mut state = GibbsState::new(docs, cfg)?;
    for _ in 0..cfg.iterations {
        state.sweep();
        debug_assert!(state.check_conservation());
    }
    Ok(state.into_model())
}

/// The `k` most probable words of `topic`, ties in vocabulary order.
pub fn lda_top_words(model: &LdaModel, topic: usize, k: usize) -> Result<Vec<String>, TextError> {
    let row = model.phi.get(topic).ok_or(TextError::BadTopicIndex {
        index: topic,
        k: model.topics,
    })?;
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
    Ok(order.into_iter().take(k).map(|w| model.vocab[w].clone()).collect())
}
