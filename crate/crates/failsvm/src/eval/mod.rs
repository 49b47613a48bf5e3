//! Classification metrics, grid-search cross-validation and learning curves.

mod curve;
mod cv;

pub use curve::{learning_curve, CurvePoint, LearningCurve};
pub use cv::{grid_search_cv, stratified_folds, CvCell, CvResult};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Confusion counts with the non-failed class (`y = +1`) as positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
}

impl ConfusionCounts {
    pub fn from_labels(y_true: &[f64], y_pred: &[f64]) -> Result<Self> {
        if y_true.len() != y_pred.len() {
            return Err(Error::Shape(format!(
                "{} true labels vs {} predictions",
                y_true.len(),
                y_pred.len()
            )));
        }
        let mut counts = ConfusionCounts::default();
        for (&t, &p) in y_true.iter().zip(y_pred) {
            match (t > 0.0, p > 0.0) {
                (true, true) => counts.true_pos += 1,
                (false, true) => counts.false_pos += 1,
                (true, false) => counts.false_neg += 1,
                (false, false) => counts.true_neg += 1,
            }
        }
        Ok(counts)
    }

    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }
}

/// The five classification scores; ratios with a zero denominator are absent
/// rather than zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub accuracy: f64,
    pub jaccard: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub specificity: Option<f64>,
}

/// Accuracy, Jaccard index, precision, recall and specificity from confusion
/// counts.
pub fn classification_metrics(counts: &ConfusionCounts) -> Result<MetricsRecord> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::EmptyInput(
            "metrics over zero evaluated samples".into(),
        ));
    }
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            None
        } else {
            Some(num as f64 / den as f64)
        }
    };
    Ok(MetricsRecord {
        accuracy: (counts.true_pos + counts.true_neg) as f64 / total as f64,
        jaccard: ratio(
            counts.true_pos,
            counts.true_pos + counts.false_pos + counts.false_neg,
        ),
        precision: ratio(counts.true_pos, counts.true_pos + counts.false_pos),
        recall: ratio(counts.true_pos, counts.true_pos + counts.false_neg),
        specificity: ratio(counts.true_neg, counts.true_neg + counts.false_pos),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn definition_arithmetic() {
        let counts = ConfusionCounts {
            true_pos: 3,
            false_pos: 1,
            false_neg: 1,
            true_neg: 5,
        };
        let m = classification_metrics(&counts).unwrap();
        assert!((m.accuracy - 0.8).abs() < 1e-15);
        assert!((m.precision.unwrap() - 0.75).abs() < 1e-15);
        assert!((m.recall.unwrap() - 0.75).abs() < 1e-15);
        assert!((m.specificity.unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert!((m.specificity.unwrap() - 0.83333).abs() < 1e-5);
        assert!((m.jaccard.unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn perfect_prediction_scores_one_everywhere() {
        let counts = ConfusionCounts {
            true_pos: 7,
            false_pos: 0,
            false_neg: 0,
            true_neg: 3,
        };
        let m = classification_metrics(&counts).unwrap();
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.jaccard, Some(1.0));
        assert_eq!(m.precision, Some(1.0));
        assert_eq!(m.recall, Some(1.0));
        assert_eq!(m.specificity, Some(1.0));
    }

    #[test]
    fn zero_denominators_are_absent() {
        let counts = ConfusionCounts {
            true_pos: 0,
            false_pos: 0,
            false_neg: 4,
            true_neg: 6,
        };
        let m = classification_metrics(&counts).unwrap();
        assert_eq!(m.precision, None);
        assert_eq!(m.recall, Some(0.0));
    }

    #[test]
    fn empty_evaluation_is_an_error() {
        assert!(matches!(
            classification_metrics(&ConfusionCounts::default()),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn counts_from_labels() {
        let y_true = [1.0, 1.0, -1.0, -1.0, 1.0];
        let y_pred = [1.0, -1.0, -1.0, 1.0, 1.0];
        let c = ConfusionCounts::from_labels(&y_true, &y_pred).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                true_pos: 2,
                false_pos: 1,
                false_neg: 1,
                true_neg: 1
            }
        );
    }

    proptest! {
        #[test]
        fn accuracy_decomposes_over_classes(
            tp in 0usize..40, fp in 0usize..40, fn_ in 0usize..40, tn in 0usize..40,
        ) {
            prop_assume!(tp + fp + fn_ + tn > 0);
            let counts = ConfusionCounts { true_pos: tp, false_pos: fp, false_neg: fn_, true_neg: tn };
            let m = classification_metrics(&counts).unwrap();
            let p = (tp + fn_) as f64;
            let n = (tn + fp) as f64;
            if let (Some(recall), Some(specificity)) = (m.recall, m.specificity) {
                let decomposed = (recall * p + specificity * n) / (p + n);
                prop_assert!((m.accuracy - decomposed).abs() < 1e-12);
            }
            if let (Some(j), Some(pr), Some(re)) = (m.jaccard, m.precision, m.recall) {
                prop_assert!(j <= pr.min(re) + 1e-12);
            }
        }
    }
}
