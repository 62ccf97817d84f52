//! Topic labels: rule-based page labels, a trainable classifier for the
//! rest, evaluation metrics, and cluster-level labels.

mod classifier;
mod cluster;
mod metrics;
mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use classifier::{stratified_split, train_classifier, Classifier, NaiveBayes, Prediction};
pub use cluster::label_clusters;
pub use metrics::{aggregate, evaluate, Averages, ClassStats, Metrics};
pub use rules::{rule_label, LabelRules};

/// The nine high-level topics, in confusion-matrix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Football,
    Sports,
    Politics,
    Movies,
    Music,
    Conflicts,
    Religion,
    Science,
    Videogames,
}

impl Label {
    pub const ALL: [Label; 9] = [
        Label::Football,
        Label::Sports,
        Label::Politics,
        Label::Movies,
        Label::Music,
        Label::Conflicts,
        Label::Religion,
        Label::Science,
        Label::Videogames,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Football => "football",
            Label::Sports => "sports",
            Label::Politics => "politics",
            Label::Movies => "movies",
            Label::Music => "music",
            Label::Conflicts => "conflicts",
            Label::Religion => "religion",
            Label::Science => "science",
            Label::Videogames => "videogames",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::ALL
            .into_iter()
            .find(|l| l.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| LabelError::UnknownLabel(s.to_owned()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LabelError {
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("cluster {0} has no labeled pages and an empty document")]
    UnlabelableCluster(usize),
    #[error("invalid rules: {0}")]
    InvalidRules(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_order_and_names() {
        let names: Vec<_> = Label::ALL.iter().map(|l| l.as_str()).collect();
        assert_eq!(
            names,
            ["football", "sports", "politics", "movies", "music", "conflicts", "religion", "science", "videogames"]
        );
        for (i, l) in Label::ALL.iter().enumerate() {
            assert_eq!(l.index(), i);
            assert_eq!(l.as_str().parse::<Label>().unwrap(), *l);
        }
        assert!("cooking".parse::<Label>().is_err());
        assert_eq!(serde_json::to_string(&Label::Videogames).unwrap(), "\"videogames\"");
    }
}
