use serde::{Deserialize, Serialize};

use super::{Classifier, Label, LabelError};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassStats<F> {
    pub precision: F,
    pub recall: F,
    pub f1: F,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages<F> {
    pub precision: F,
    pub recall: F,
    pub f1: F,
}

/// Confusion matrix `confusion[true][predicted]` over [`Label::ALL`] plus
/// per-label and aggregate scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics<F> {
    pub confusion: Vec<Vec<u64>>,
    pub per_class: Vec<ClassStats<F>>,
    pub accuracy: F,
    pub macro_avg: Averages<F>,
    pub weighted_avg: Averages<F>,
    pub total_support: u64,
}

fn ratio<F: Real>(num: u64, den: u64) -> F {
    if den == 0 {
        F::zero()
    } else {
        F::from_count(num) / F::from_count(den)
    }
}

pub(crate) fn f1<F: Real>(p: F, r: F) -> F {
    if p + r == F::zero() {
        F::zero()
    } else {
        (p + p) * r / (p + r)
    }
}

/// Macro (unweighted over labels with support) and support-weighted
/// averages of per-class scores, plus the total support.
pub fn aggregate<F: Real>(per_class: &[ClassStats<F>]) -> (Averages<F>, Averages<F>, u64) {
    let supported: Vec<&ClassStats<F>> = per_class.iter().filter(|c| c.support > 0).collect();
    let total: u64 = per_class.iter().map(|c| c.support).sum();
    let zero = Averages {
        precision: F::zero(),
        recall: F::zero(),
        f1: F::zero(),
    };
    if supported.is_empty() {
        return (zero, zero, total);
    }
    let n = F::from_usize(supported.len()).unwrap();
    let mean = |f: fn(&ClassStats<F>) -> F| supported.iter().map(|c| f(c)).sum::<F>() / n;
    let macro_avg = Averages {
        precision: mean(|c| c.precision),
        recall: mean(|c| c.recall),
        f1: mean(|c| c.f1),
    };
    let tot = F::from_count(total);
    let weighted = |f: fn(&ClassStats<F>) -> F| supported.iter().map(|c| f(c) * F::from_count(c.support)).sum::<F>() / tot;
    let weighted_avg = Averages {
        precision: weighted(|c| c.precision),
        recall: weighted(|c| c.recall),
        f1: weighted(|c| c.f1),
    };
    (macro_avg, weighted_avg, total)
}

impl<F: Real> Metrics<F> {
    /// Scores from a 9×9 confusion matrix in [`Label::ALL`] order.
    pub fn from_confusion(confusion: Vec<Vec<u64>>) -> Self {
        let k = Label::ALL.len();
        assert!(confusion.len() == k && confusion.iter().all(|r| r.len() == k), "confusion matrix must be 9×9");
        let per_class: Vec<ClassStats<F>> = (0..k)
            .map(|l| {
                let tp = confusion[l][l];
                let row: u64 = confusion[l].iter().sum();
                let col: u64 = confusion.iter().map(|r| r[l]).sum();
                let precision = ratio::<F>(tp, col);
                let recall = ratio::<F>(tp, row);
                ClassStats {
                    precision,
                    recall,
                    f1: f1(precision, recall),
                    support: row,
                }
            })
            .collect();
        let (macro_avg, weighted_avg, total_support) = aggregate(&per_class);
        let trace: u64 = (0..k).map(|i| confusion[i][i]).sum();
        Metrics {
            accuracy: ratio(trace, total_support),
            confusion,
            per_class,
            macro_avg,
            weighted_avg,
            total_support,
        }
    }
}

/// Scores `model` on a held-out set.
pub fn evaluate<F: Real>(model: &dyn Classifier, test: &[(Vec<String>, Label)]) -> Result<Metrics<F>, LabelError> {
    if test.is_empty() {
        return Err(LabelError::EmptyTestSet);
    }
    let k = Label::ALL.len();
    let mut confusion = vec![vec![0u64; k]; k];
    for (tokens, truth) in test {
        let pred = model.predict(tokens).label;
        confusion[truth.index()][pred.index()] += 1;
    }
    Ok(Metrics::from_confusion(confusion))
}
