// SPDX-License-Identifier: Apache-2.0

//! Binary regression trees grown greedily on squared error.
//!
//! On 0/1 targets the squared-error decrease of a split is exactly half its
//! weighted Gini decrease, so the same builder grows the classification tree.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Node {
    Leaf {
        value: f64,
        samples: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        /// Rows with `x[feature] <= threshold`.
        left: usize,
        right: usize,
        samples: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    /// Root at index 0.
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf(value: f64, samples: usize) -> Self {
        Tree {
            nodes: vec![Node::Leaf { value, samples }],
        }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value, .. } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => i = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    /// Index of the leaf `x` falls into.
    pub fn leaf_index(&self, x: &[f64]) -> usize {
        let mut i = 0;
        while let Node::Split {
            feature,
            threshold,
            left,
            right,
            ..
        } = self.nodes[i]
        {
            i = if x[feature] <= threshold { left } else { right };
        }
        i
    }

    pub fn leaves(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.nodes.iter().filter_map(|n| match *n {
            Node::Leaf { value, samples } => Some((value, samples)),
            Node::Split { .. } => None,
        })
    }

    pub fn depth(&self) -> usize {
        fn walk(t: &Tree, i: usize) -> usize {
            match t.nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(t, left).max(walk(t, right)),
            }
        }
        walk(self, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowParams {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    gain: f64,
    feature: usize,
    threshold: f64,
}

/// Best split of `rows` by squared-error decrease. Ties go to the lower
/// feature index, then the lower threshold.
fn best_split(x: &[Vec<f64>], y: &[f64], rows: &[usize], min_leaf: usize) -> Option<Candidate> {
    let n = rows.len();
    if n < 2 * min_leaf {
        return None;
    }
    let total: f64 = rows.iter().map(|&r| y[r]).sum();
    let parent = -total * total / n as f64;
    let features = x.first().map_or(0, Vec::len);
    let mut best: Option<Candidate> = None;
    let mut order: Vec<usize> = rows.to_vec();
    for f in 0..features {
        order.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]).then(a.cmp(&b)));
        let mut left_sum = 0.0;
        for i in 0..n - 1 {
            left_sum += y[order[i]];
            let nl = i + 1;
            let nr = n - nl;
            if nl < min_leaf {
                continue;
            }
            if nr < min_leaf {
                break;
            }
            let (lo, hi) = (x[order[i]][f], x[order[i + 1]][f]);
            if lo == hi {
                continue;
            }
            let right_sum = total - left_sum;
            // sum of squares is common to all splits, so compare -S^2/n terms only
            let child = -left_sum * left_sum / nl as f64 - right_sum * right_sum / nr as f64;
            let gain = parent - child;
            if gain <= 1e-12 {
                continue;
            }
            if best.is_none_or(|b| gain > b.gain + 1e-12) {
                let mid = lo + (hi - lo) / 2.0;
                let threshold = if mid < hi { mid } else { lo };
                best = Some(Candidate {
                    gain,
                    feature: f,
                    threshold,
                });
            }
        }
    }
    best
}

/// Grows a tree on targets `y`; `leaf_value` maps the rows reaching a leaf
/// to its output.
pub fn grow<F>(x: &[Vec<f64>], y: &[f64], rows: Vec<usize>, params: GrowParams, leaf_value: F) -> Tree
where
    F: Fn(&[usize]) -> f64,
{
    let mut tree = Tree { nodes: Vec::new() };
    let mut stack = vec![(0usize, rows, 0usize)];
    tree.nodes.push(Node::Leaf { value: 0.0, samples: 0 });
    while let Some((slot, rows, depth)) = stack.pop() {
        let can_split = params.max_depth.is_none_or(|d| depth < d);
        let split = if can_split {
            best_split(x, y, &rows, params.min_samples_leaf)
        } else {
            None
        };
        match split {
            None => {
                tree.nodes[slot] = Node::Leaf {
                    value: leaf_value(&rows),
                    samples: rows.len(),
                };
            }
            Some(c) => {
                let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[i][c.feature] <= c.threshold);
                let left = tree.nodes.len();
                let right = left + 1;
                let placeholder = Node::Leaf { value: 0.0, samples: 0 };
                tree.nodes.push(placeholder.clone());
                tree.nodes.push(placeholder);
                tree.nodes[slot] = Node::Split {
                    feature: c.feature,
                    threshold: c.threshold,
                    left,
                    right,
                    samples: rows.len(),
                };
                stack.push((right, r, depth + 1));
                stack.push((left, l, depth + 1));
            }
        }
    }
    tree
}
