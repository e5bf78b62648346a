// SPDX-License-Identifier: Apache-2.0

//! Train-and-evaluate runs: score a graph once per variant, then compare the
//! raw scores with the tree learners on a stratified hold-out split.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::eval::{compute_metrics, metric_table, rank_methods, EvalRecord, Metric, RankReport};
use crate::graph::Graph;
use crate::ml::{
    build_features, fit_decision_tree, fit_gradient_boost, stratified_indices, BoostParams, FeatureRow, Learner,
    Method, TreeParams,
};
use crate::pipeline::{prune, score_pruned_until, ScoreConfig};
use crate::scoring::{score_values, Variant};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub score: ScoreConfig,
    pub train_fraction: f64,
    pub threshold: f64,
    pub seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            score: ScoreConfig::default(),
            train_fraction: 0.7,
            threshold: 0.5,
            seed: 0,
        }
    }
}

/// A pruned graph with its per-node scores.
#[derive(Debug, Clone)]
pub struct ScoredGraph {
    pub name: String,
    pub graph: Graph,
    pub scores: BTreeMap<Variant, Vec<f64>>,
}

/// Prunes `g` once and scores it for every variant used by `methods`.
pub fn score_dataset(name: &str, g: &Graph, methods: &[Method], cfg: &ScoreConfig) -> ScoredGraph {
    let pruned = prune(g, cfg);
    let mut scores = BTreeMap::new();
    for m in methods {
        scores.entry(m.variant).or_insert_with(|| {
            let run = score_pruned_until(&pruned, m.variant, cfg, None).expect("no deadline set");
            score_values(&run.scores)
        });
    }
    ScoredGraph {
        name: name.to_owned(),
        graph: pruned.graph,
        scores,
    }
}

/// Evaluates every method against one labelling. Problems with the labels
/// are reported in the records, not as errors.
pub fn evaluate_target(
    sg: &ScoredGraph,
    target: &str,
    labels: &[bool],
    methods: &[Method],
    cfg: &EvalConfig,
) -> Vec<EvalRecord> {
    let record = |method: &Method, metrics, note: Option<String>| EvalRecord {
        dataset: sg.name.clone(),
        target: target.to_owned(),
        method: method.name(),
        metrics,
        note,
    };
    let (train, test) = match stratified_indices(labels, cfg.train_fraction, cfg.seed) {
        Ok(split) => split,
        Err(e) => return methods.iter().map(|m| record(m, None, Some(e.to_string()))).collect(),
    };
    let mut features: BTreeMap<Variant, Vec<FeatureRow>> = BTreeMap::new();
    let mut out = Vec::with_capacity(methods.len());
    for m in methods {
        let rows = features
            .entry(m.variant)
            .or_insert_with(|| build_features(&sg.graph, &sg.scores[&m.variant], labels));
        let pick = |idx: &[usize]| -> (Vec<Vec<f64>>, Vec<bool>) {
            (
                idx.iter().map(|&i| rows[i].values()).collect(),
                idx.iter().map(|&i| labels[i]).collect(),
            )
        };
        let (x_test, y_test) = pick(&test);
        let predictions = match m.learner {
            Learner::Raw => Ok(test.iter().map(|&i| rows[i].own_score).collect::<Vec<_>>()),
            Learner::DecisionTree => {
                let (x, y) = pick(&train);
                Ok(fit_decision_tree(&x, &y, TreeParams::default()).predict_matrix(&x_test))
            }
            Learner::GradientBoost => {
                let (x, y) = pick(&train);
                fit_gradient_boost(&x, &y, BoostParams::default()).map(|(model, _)| model.predict_matrix(&x_test))
            }
        };
        out.push(match predictions {
            Ok(p) => {
                let metrics = compute_metrics(&p, &y_test, cfg.threshold);
                let note = metrics
                    .no_positive_predictions
                    .then(|| "no positive predictions; precision set to 0".to_owned());
                record(m, Some(metrics), note)
            }
            Err(e) => record(m, None, Some(e.to_string())),
        });
    }
    out
}

/// Friedman reports for AUC-ROC and AUC-PR per target, when at least two
/// methods and two datasets are present.
pub fn rank_reports(records: &[EvalRecord], methods: &[Method]) -> Vec<(String, Metric, RankReport)> {
    let names: Vec<String> = methods.iter().map(Method::name).collect();
    let mut targets: Vec<&str> = Vec::new();
    for r in records {
        if !targets.contains(&r.target.as_str()) {
            targets.push(&r.target);
        }
    }
    let mut out = Vec::new();
    for target in targets {
        for metric in [Metric::AucRoc, Metric::AucPr] {
            let (datasets, table) = metric_table(records, target, &names, metric);
            if names.len() < 2 || datasets.len() < 2 {
                continue;
            }
            if let Ok(report) = rank_methods(&names, &table) {
                out.push((target.to_owned(), metric, report));
            }
        }
    }
    out
}
