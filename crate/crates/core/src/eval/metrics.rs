// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

/// Threshold metrics plus both curve areas. The areas are `None` when the
/// labels hold a single class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auc_roc: Option<f64>,
    pub auc_pr: Option<f64>,
    pub threshold: f64,
    /// No score exceeded the threshold; precision was set to 0.
    pub no_positive_predictions: bool,
}

impl MetricSet {
    /// Metric used for ranking, with undefined areas counted as 0.
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Precision => self.precision,
            Metric::F1 => self.f1,
            Metric::AucRoc => self.auc_roc.unwrap_or(0.0),
            Metric::AucPr => self.auc_pr.unwrap_or(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Precision,
    F1,
    AucRoc,
    AucPr,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Precision, Metric::F1, Metric::AucRoc, Metric::AucPr];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Precision => "precision",
            Metric::F1 => "f1",
            Metric::AucRoc => "auc_roc",
            Metric::AucPr => "auc_pr",
        }
    }
}

/// A row is predicted positive when its score is strictly above `threshold`.
pub fn compute_metrics(scores: &[f64], labels: &[bool], threshold: f64) -> MetricSet {
    assert_eq!(scores.len(), labels.len(), "scores and labels must align");
    let mut tp = 0usize;
    let mut predicted = 0usize;
    for (&s, &l) in scores.iter().zip(labels) {
        if s > threshold {
            predicted += 1;
            tp += l as usize;
        }
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let precision = if predicted == 0 {
        0.0
    } else {
        tp as f64 / predicted as f64
    };
    let recall = if positives == 0 {
        0.0
    } else {
        tp as f64 / positives as f64
    };
    let f1 = if precision == 0.0 || recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let two_class = positives > 0 && positives < labels.len();
    MetricSet {
        precision,
        recall,
        f1,
        auc_roc: two_class.then(|| auc_roc(scores, labels)),
        auc_pr: two_class.then(|| auc_pr(scores, labels)),
        threshold,
        no_positive_predictions: predicted == 0,
    }
}

/// Indices sorted by ascending score, grouped into runs of equal score.
fn tie_groups(scores: &[f64]) -> (Vec<usize>, Vec<(usize, usize)>) {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=order.len() {
        if i == order.len() || scores[order[i]] != scores[order[start]] {
            groups.push((start, i));
            start = i;
        }
    }
    (order, groups)
}

/// Mann-Whitney statistic with average ranks for ties. Panics on single-class labels.
pub fn auc_roc(scores: &[f64], labels: &[bool]) -> f64 {
    let pos = labels.iter().filter(|&&l| l).count();
    let neg = labels.len() - pos;
    assert!(pos > 0 && neg > 0, "AUC-ROC needs both classes");
    let (order, groups) = tie_groups(scores);
    let mut rank_sum = 0.0;
    for (a, b) in groups {
        // ranks a+1 ..= b share their mean
        let avg = (a + 1 + b) as f64 / 2.0;
        let hits = order[a..b].iter().filter(|&&i| labels[i]).count();
        rank_sum += avg * hits as f64;
    }
    (rank_sum - (pos * (pos + 1)) as f64 / 2.0) / (pos as f64 * neg as f64)
}

/// Average precision: sum over distinct thresholds, from the highest down,
/// of recall gained times precision at that threshold.
pub fn auc_pr(scores: &[f64], labels: &[bool]) -> f64 {
    let pos = labels.iter().filter(|&&l| l).count();
    assert!(pos > 0, "AUC-PR needs a positive label");
    let (order, groups) = tie_groups(scores);
    let (mut tp, mut seen) = (0usize, 0usize);
    let mut area = 0.0;
    for &(a, b) in groups.iter().rev() {
        let hits = order[a..b].iter().filter(|&&i| labels[i]).count();
        tp += hits;
        seen += b - a;
        if hits > 0 {
            area += (hits as f64 / pos as f64) * (tp as f64 / seen as f64);
        }
    }
    area
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_example() {
        let m = compute_metrics(&[0.9, 0.8, 0.7, 0.6], &[true, false, true, false], 0.5);
        assert_eq!(m.auc_roc, Some(0.75));
        assert!((m.auc_pr.unwrap() - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-15);
        assert_eq!(m.precision, 0.5);
        assert_eq!(m.recall, 1.0);
    }

    #[test]
    fn perfect_and_constant() {
        let labels = [false, false, true, true, false];
        let m = compute_metrics(&[0.1, 0.2, 0.9, 0.8, 0.3], &labels, 0.5);
        assert_eq!((m.auc_roc, m.auc_pr), (Some(1.0), Some(1.0)));
        assert_eq!((m.precision, m.f1), (1.0, 1.0));
        let m = compute_metrics(&[0.4; 5], &labels, 0.5);
        assert_eq!(m.auc_roc, Some(0.5));
        assert!((m.auc_pr.unwrap() - 0.4).abs() < 1e-12);
        assert!(m.no_positive_predictions);
        assert_eq!((m.precision, m.f1), (0.0, 0.0));
    }

    #[test]
    fn single_class_has_no_areas() {
        let m = compute_metrics(&[0.9, 0.1], &[false, false], 0.5);
        assert_eq!((m.auc_roc, m.auc_pr), (None, None));
        assert_eq!(m.precision, 0.0);
    }

    #[test]
    fn threshold_is_strict() {
        let m = compute_metrics(&[0.5, 0.6], &[true, false], 0.5);
        assert_eq!(m.precision, 0.0);
        assert!(!m.no_positive_predictions);
    }
}
