// SPDX-License-Identifier: Apache-2.0

//! Tree learners on top of GARG-AML scores.
//!
//! Each node is described by its own score and degree plus the min, mean,
//! max and population standard deviation of its neighbours' degrees and
//! scores. Two classifiers are trained on those rows: a single Gini tree and
//! logistic gradient boosting.

pub mod tree;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};
use crate::rng::stream;
use crate::scoring::Variant;
use crate::{Error, Result};

pub use tree::{grow, GrowParams, Node, Tree};

pub const FEATURE_NAMES: [&str; 10] = [
    "own_score",
    "own_degree",
    "neigh_degree_min",
    "neigh_degree_mean",
    "neigh_degree_max",
    "neigh_degree_std",
    "neigh_score_min",
    "neigh_score_mean",
    "neigh_score_max",
    "neigh_score_std",
];

/// Min, mean, max, population std. All zero for an empty set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    pub std: f64,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let values: Vec<f64> = values.into_iter().collect();
        if values.is_empty() {
            return Summary::default();
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Summary {
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            mean,
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            std: var.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub node: NodeId,
    pub own_score: f64,
    pub own_degree: usize,
    pub neigh_degree: Summary,
    pub neigh_score: Summary,
    pub label: bool,
}

impl FeatureRow {
    /// Values in [`FEATURE_NAMES`] order.
    pub fn values(&self) -> Vec<f64> {
        let (d, s) = (&self.neigh_degree, &self.neigh_score);
        vec![
            self.own_score,
            self.own_degree as f64,
            d.min,
            d.mean,
            d.max,
            d.std,
            s.min,
            s.mean,
            s.max,
            s.std,
        ]
    }
}

/// One row per node of `g`; neighbours are taken without regard to direction.
pub fn build_features(g: &Graph, scores: &[f64], labels: &[bool]) -> Vec<FeatureRow> {
    assert_eq!(scores.len(), g.node_count(), "one score per node");
    assert_eq!(labels.len(), g.node_count(), "one label per node");
    g.nodes()
        .map(|v| {
            let ns = g.neighbours(v);
            FeatureRow {
                node: v,
                own_score: scores[v as usize],
                own_degree: ns.len(),
                neigh_degree: Summary::of(ns.iter().map(|&u| g.degree(u) as f64)),
                neigh_score: Summary::of(ns.iter().map(|&u| scores[u as usize])),
                label: labels[v as usize],
            }
        })
        .collect()
}

/// Splits per class: `round(count * train_fraction)` rows of each class go to
/// the training side, kept within `[1, count - 1]`. Both sides keep input order.
pub fn stratified_split(
    rows: &[FeatureRow],
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<FeatureRow>, Vec<FeatureRow>)> {
    let (train, test) = stratified_indices(&rows.iter().map(|r| r.label).collect::<Vec<_>>(), train_fraction, seed)?;
    Ok((
        train.iter().map(|&i| rows[i].clone()).collect(),
        test.iter().map(|&i| rows[i].clone()).collect(),
    ))
}

/// Index form of [`stratified_split`].
pub fn stratified_indices(labels: &[bool], train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {train_fraction} outside (0, 1)"
        )));
    }
    let mut rng = stream(seed, "split");
    let mut in_train = vec![false; labels.len()];
    for class in [false, true] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < 2 {
            return Err(Error::Stratify {
                class,
                count: members.len(),
            });
        }
        let take = ((members.len() as f64 * train_fraction).round() as usize).clamp(1, members.len() - 1);
        members.shuffle(&mut rng);
        for &i in &members[..take] {
            in_train[i] = true;
        }
    }
    Ok((0..labels.len()).partition(|&i| in_train[i]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    DecisionTree,
    GradientBoost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub kind: ModelKind,
    pub feature_names: Vec<String>,
    pub trees: Vec<Tree>,
    pub learning_rate: f64,
    pub base_score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    pub min_samples_leaf: usize,
    pub max_depth: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            min_samples_leaf: 10,
            max_depth: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostParams {
    pub n_stages: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    pub min_samples_leaf: usize,
    /// Bound on a leaf's Newton step before shrinkage.
    pub max_leaf_step: f64,
}

impl Default for BoostParams {
    fn default() -> Self {
        BoostParams {
            n_stages: 100,
            max_depth: 3,
            learning_rate: 0.1,
            min_samples_leaf: 10,
            max_leaf_step: 10.0,
        }
    }
}

fn matrix(rows: &[FeatureRow]) -> (Vec<Vec<f64>>, Vec<bool>) {
    (
        rows.iter().map(FeatureRow::values).collect(),
        rows.iter().map(|r| r.label).collect(),
    )
}

fn names() -> Vec<String> {
    FEATURE_NAMES.iter().map(|s| s.to_string()).collect()
}

pub fn train_decision_tree(train: &[FeatureRow]) -> TreeModel {
    let (x, y) = matrix(train);
    let mut model = fit_decision_tree(&x, &y, TreeParams::default());
    model.feature_names = names();
    model
}

/// Gini tree; every leaf predicts its positive fraction. Empty input gives a
/// single leaf at 0.
pub fn fit_decision_tree(x: &[Vec<f64>], y: &[bool], params: TreeParams) -> TreeModel {
    let target: Vec<f64> = y.iter().map(|&b| b as u8 as f64).collect();
    let tree = if x.is_empty() {
        Tree::leaf(0.0, 0)
    } else {
        let frac = |rows: &[usize]| rows.iter().map(|&r| target[r]).sum::<f64>() / rows.len() as f64;
        let grow_params = GrowParams {
            max_depth: params.max_depth,
            min_samples_leaf: params.min_samples_leaf,
        };
        grow(x, &target, (0..x.len()).collect(), grow_params, frac)
    };
    TreeModel {
        kind: ModelKind::DecisionTree,
        feature_names: Vec::new(),
        trees: vec![tree],
        learning_rate: 1.0,
        base_score: 0.0,
    }
}

pub fn train_gradient_boost(train: &[FeatureRow]) -> Result<TreeModel> {
    let (x, y) = matrix(train);
    let (mut model, _) = fit_gradient_boost(&x, &y, BoostParams::default())?;
    model.feature_names = names();
    Ok(model)
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Mean binary cross-entropy of raw margins.
pub fn log_loss(margins: &[f64], y: &[bool]) -> f64 {
    let total: f64 = margins
        .iter()
        .zip(y)
        .map(|(&f, &label)| {
            // log(1 + e^f) - y f, stable in both tails
            let softplus = if f > 0.0 {
                f + (-f).exp().ln_1p()
            } else {
                f.exp().ln_1p()
            };
            softplus - if label { f } else { 0.0 }
        })
        .sum();
    total / margins.len() as f64
}

/// Logistic-loss boosting with one Newton step per leaf. Returns the model and
/// the training log-loss before stage 1 and after every stage.
pub fn fit_gradient_boost(x: &[Vec<f64>], y: &[bool], params: BoostParams) -> Result<(TreeModel, Vec<f64>)> {
    let positives = y.iter().filter(|&&b| b).count();
    if positives == 0 || positives == y.len() {
        return Err(Error::SingleClass);
    }
    let prior = positives as f64 / y.len() as f64;
    let base_score = (prior / (1.0 - prior)).ln();
    let mut margin = vec![base_score; y.len()];
    let mut trace = vec![log_loss(&margin, y)];
    let mut trees = Vec::with_capacity(params.n_stages);
    let grow_params = GrowParams {
        max_depth: Some(params.max_depth),
        min_samples_leaf: params.min_samples_leaf,
    };
    for _ in 0..params.n_stages {
        let prob: Vec<f64> = margin.iter().map(|&f| sigmoid(f)).collect();
        let residual: Vec<f64> = y.iter().zip(&prob).map(|(&l, &p)| l as u8 as f64 - p).collect();
        let newton = |rows: &[usize]| {
            let num: f64 = rows.iter().map(|&r| residual[r]).sum();
            let den: f64 = rows.iter().map(|&r| prob[r] * (1.0 - prob[r])).sum();
            if den.abs() < 1e-150 {
                0.0
            } else {
                // a lone misfit among confident rows has a vanishing hessian
                (num / den).clamp(-params.max_leaf_step, params.max_leaf_step)
            }
        };
        let tree = grow(x, &residual, (0..y.len()).collect(), grow_params, newton);
        for (f, xi) in margin.iter_mut().zip(x) {
            *f += params.learning_rate * tree.predict(xi);
        }
        trace.push(log_loss(&margin, y));
        trees.push(tree);
    }
    Ok((
        TreeModel {
            kind: ModelKind::GradientBoost,
            feature_names: Vec::new(),
            trees,
            learning_rate: params.learning_rate,
            base_score,
        },
        trace,
    ))
}

impl TreeModel {
    /// Raw margin for boosting; the leaf fraction for a single tree.
    pub fn margin(&self, x: &[f64]) -> f64 {
        match self.kind {
            ModelKind::DecisionTree => self.trees[0].predict(x),
            ModelKind::GradientBoost => {
                self.base_score + self.learning_rate * self.trees.iter().map(|t| t.predict(x)).sum::<f64>()
            }
        }
    }

    pub fn predict_one(&self, x: &[f64]) -> f64 {
        match self.kind {
            ModelKind::DecisionTree => self.margin(x),
            ModelKind::GradientBoost => sigmoid(self.margin(x)),
        }
    }

    pub fn predict_matrix(&self, x: &[Vec<f64>]) -> Vec<f64> {
        x.iter().map(|xi| self.predict_one(xi)).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn predict(model: &TreeModel, rows: &[FeatureRow]) -> Vec<f64> {
    rows.iter().map(|r| model.predict_one(&r.values())).collect()
}

/// How a node's suspicion score is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Learner {
    /// The GARG-AML score itself.
    Raw,
    DecisionTree,
    GradientBoost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Method {
    pub learner: Learner,
    pub variant: Variant,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::new(Learner::Raw, Variant::Undirected),
        Method::new(Learner::Raw, Variant::Directed),
        Method::new(Learner::DecisionTree, Variant::Undirected),
        Method::new(Learner::DecisionTree, Variant::Directed),
        Method::new(Learner::GradientBoost, Variant::Undirected),
        Method::new(Learner::GradientBoost, Variant::Directed),
    ];

    pub const fn new(learner: Learner, variant: Variant) -> Self {
        Method { learner, variant }
    }

    pub fn name(&self) -> String {
        let l = match self.learner {
            Learner::Raw => "raw",
            Learner::DecisionTree => "tree",
            Learner::GradientBoost => "boost",
        };
        format!("{l}-{}", self.variant)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows_from(x: &[Vec<f64>], y: &[bool]) -> Vec<FeatureRow> {
        x.iter()
            .zip(y)
            .enumerate()
            .map(|(i, (xi, &label))| FeatureRow {
                node: i as NodeId,
                own_score: xi[0],
                own_degree: 0,
                neigh_degree: Summary::default(),
                neigh_score: Summary::default(),
                label,
            })
            .collect()
    }

    #[test]
    fn summary_of_two_values() {
        let s = Summary::of([0.2, 0.4]);
        assert!((s.mean - 0.3).abs() < 1e-15);
        assert_eq!((s.min, s.max), (0.2, 0.4));
        assert!((s.std - 0.1).abs() < 1e-15);
        assert_eq!(Summary::of([]), Summary::default());
        assert_eq!(Summary::of([5.0]).std, 0.0);
    }

    #[test]
    fn isolated_node_features() {
        let g = Graph::from_edges(3, [(0, 1)], false);
        let rows = build_features(&g, &[0.1, 0.2, 0.3], &[false, false, true]);
        assert_eq!(rows[2].own_score, 0.3);
        assert_eq!(rows[2].own_degree, 0);
        assert_eq!(rows[2].values()[2..], [0.0; 8]);
        assert_eq!(rows[0].neigh_score.mean, 0.2);
    }

    #[test]
    fn split_counts() {
        let labels: Vec<bool> = (0..100).map(|i| i < 10).collect();
        let (train, test) = stratified_indices(&labels, 0.7, 3).unwrap();
        assert_eq!(train.iter().filter(|&&i| labels[i]).count(), 7);
        assert_eq!(train.len(), 70);
        assert_eq!(test.len(), 30);
        let labels: Vec<bool> = (0..100).map(|i| i < 33).collect();
        let (train, _) = stratified_indices(&labels, 0.7, 3).unwrap();
        assert_eq!(train.iter().filter(|&&i| labels[i]).count(), 23);
    }

    #[test]
    fn split_rejects_degenerate_classes() {
        assert!(matches!(
            stratified_indices(&[false; 10], 0.7, 0),
            Err(Error::Stratify { class: true, count: 0 })
        ));
        assert!(stratified_indices(&[false, true, true], 0.7, 0).is_err());
        assert!(stratified_indices(&[false, false, true, true], 1.0, 0).is_err());
    }

    #[test]
    fn single_leaf_prior() {
        let x = vec![vec![1.0]; 15];
        let y: Vec<bool> = (0..15).map(|i| i < 3).collect();
        let m = train_decision_tree(&rows_from(&x, &y));
        assert_eq!(m.trees[0].nodes.len(), 1);
        assert!(predict(&m, &rows_from(&x, &y)).iter().all(|&p| p == 0.2));
    }

    #[test]
    fn boosting_on_constant_features_stays_at_prior() {
        let x = vec![vec![0.5, 1.0]; 50];
        let y: Vec<bool> = (0..50).map(|i| i % 5 == 0).collect();
        let (m, _) = fit_gradient_boost(&x, &y, BoostParams::default()).unwrap();
        assert_eq!(m.trees.len(), 100);
        for p in m.predict_matrix(&x) {
            assert!((p - 0.2).abs() < 1e-6);
        }
    }

    #[test]
    fn boosting_needs_both_classes() {
        assert!(matches!(
            fit_gradient_boost(&[vec![0.0]], &[true], BoostParams::default()),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn boosting_loss_decreases_on_separable_data() {
        let x: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64]).collect();
        let y: Vec<bool> = (0..100).map(|i| i >= 40).collect();
        let (m, trace) = fit_gradient_boost(&x, &y, BoostParams::default()).unwrap();
        for w in trace[..11].windows(2) {
            assert!(w[1] < w[0]);
        }
        assert!(m.trees.iter().all(|t| t.depth() <= 3));
    }

    #[test]
    fn model_json_round_trip() {
        let x: Vec<Vec<f64>> = (0..60).map(|i| vec![(i % 7) as f64, i as f64]).collect();
        let y: Vec<bool> = (0..60).map(|i| i % 7 > 3).collect();
        let (m, _) = fit_gradient_boost(&x, &y, BoostParams::default()).unwrap();
        let back = TreeModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back.predict_matrix(&x), m.predict_matrix(&x));
    }

    #[test]
    fn method_names() {
        let names: Vec<String> = Method::ALL.iter().map(Method::name).collect();
        assert_eq!(names[0], "raw-undirected");
        assert_eq!(names[5], "boost-directed");
        for n in &names {
            assert_eq!(&n.parse::<Method>().unwrap().name(), n);
        }
    }
}
