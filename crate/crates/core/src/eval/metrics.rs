//! Precision, recall and support-weighted F1, all in percent.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::classifier::{predict, IntentModel, IntentPrediction};
use crate::corpus::TrainingSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntentMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub per_intent: BTreeMap<String, IntentMetrics>,
    pub weighted_f1: f64,
    /// `confusion[truth][predicted]`.
    pub confusion: BTreeMap<String, BTreeMap<String, usize>>,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Metrics for aligned `(truth, predicted)` label pairs. Labels are the
/// union of both sides; a label that is only ever predicted has support 0.
pub fn metrics_from_labels<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> MetricsReport {
    let mut confusion: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    let mut labels = BTreeSet::new();
    for (truth, pred) in pairs {
        labels.insert(truth.to_string());
        labels.insert(pred.to_string());
        *confusion
            .entry(truth.to_string())
            .or_default()
            .entry(pred.to_string())
            .or_insert(0) += 1;
    }

    let mut per_intent = BTreeMap::new();
    let mut weighted = 0.0;
    let mut total = 0usize;
    for label in &labels {
        let row = confusion.get(label);
        let tp = row.and_then(|r| r.get(label)).copied().unwrap_or(0);
        let support: usize = row.map(|r| r.values().sum()).unwrap_or(0);
        let predicted: usize = confusion.values().filter_map(|r| r.get(label)).sum();
        let p = ratio(tp, predicted);
        let r = ratio(tp, support);
        let f1 = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
        weighted += support as f64 * f1;
        total += support;
        per_intent.insert(
            label.clone(),
            IntentMetrics {
                precision: 100.0 * p,
                recall: 100.0 * r,
                f1: 100.0 * f1,
                support,
            },
        );
    }
    MetricsReport {
        per_intent,
        weighted_f1: if total == 0 {
            0.0
        } else {
            100.0 * weighted / total as f64
        },
        confusion,
    }
}

/// Classifies every test query; returns the metrics and the `(truth,
/// prediction)` pairs in test-set order.
pub fn evaluate_with_predictions(
    model: &IntentModel,
    test: &TrainingSet,
) -> (MetricsReport, Vec<(String, IntentPrediction)>) {
    let predictions: Vec<(String, IntentPrediction)> = test
        .iter()
        .map(|q| (q.intent.clone(), predict(model, &q.text)))
        .collect();
    let report = metrics_from_labels(predictions.iter().map(|(t, p)| (t.as_str(), p.intent.as_str())));
    (report, predictions)
}

pub fn evaluate(model: &IntentModel, test: &TrainingSet) -> MetricsReport {
    evaluate_with_predictions(model, test).0
}

/// `(experiment - baseline) / baseline * 100`; `None` when the baseline is 0.
pub fn pct_improvement(f1_exp: f64, f1_base: f64) -> Option<f64> {
    (f1_base != 0.0).then(|| (f1_exp - f1_base) / f1_base * 100.0)
}

/// Share of the human arm's improvement reached by augmentation. `None`
/// when the human arm did not move or augmentation made things worse.
pub fn pct_optimal(imp_aug: f64, imp_human: f64) -> Option<f64> {
    (imp_human != 0.0 && imp_aug >= 0.0).then(|| imp_aug / imp_human * 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_classification() {
        let r = metrics_from_labels([("A", "A"), ("B", "B"), ("B", "B")]);
        assert_eq!(r.weighted_f1, 100.0);
        assert!(r.per_intent.values().all(|m| m.precision == 100.0 && m.recall == 100.0));
    }

    #[test]
    fn weighted_by_support() {
        // A: 3 correct, B: its single query predicted as C. F1(A)=100, F1(B)=0.
        let r = metrics_from_labels([("A", "A"), ("A", "A"), ("A", "A"), ("B", "C")]);
        assert_eq!(r.per_intent["A"].f1, 100.0);
        assert_eq!(r.per_intent["B"].f1, 0.0);
        assert_eq!(r.weighted_f1, 75.0);
        assert_eq!(r.per_intent["C"].support, 0);
        assert_eq!(r.per_intent["C"].f1, 0.0);
    }

    #[test]
    fn partial_scores() {
        let r = metrics_from_labels([("A", "A"), ("A", "B"), ("B", "B")]);
        assert_eq!(r.per_intent["A"].precision, 100.0);
        assert_eq!(r.per_intent["A"].recall, 50.0);
        assert_eq!(r.per_intent["B"].precision, 50.0);
        assert_eq!(r.confusion["A"]["B"], 1);
    }

    #[test]
    fn improvement_and_optimal() {
        assert!((pct_improvement(68.5, 66.4).unwrap() - 3.1627).abs() < 1e-4);
        assert!((pct_improvement(84.2, 87.1).unwrap() + 3.3295).abs() < 1e-4);
        assert_eq!(pct_improvement(50.0, 50.0), Some(0.0));
        assert_eq!(pct_improvement(50.0, 0.0), None);
        assert_eq!(pct_optimal(2.0, 2.0), Some(100.0));
        assert_eq!(pct_optimal(2.0, 0.0), None);
        assert_eq!(pct_optimal(-0.6, 7.5), None);
    }
}
