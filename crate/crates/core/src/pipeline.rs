// SPDX-License-Identifier: Apache-2.0

//! End-to-end scoring: detect communities, drop the edges between them, then
//! score every node of the pruned graph.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::community::{louvain_until, prune_inter_community, CommunityPartition};
use crate::graph::Graph;
use crate::scoring::{score_all_until, GargAmlScore, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreConfig {
    /// Louvain resolution; larger values give smaller communities.
    pub resolution: f64,
    pub seed: u64,
    pub workers: usize,
    /// Skip community detection and score the graph as given.
    pub no_prune: bool,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        ScoreConfig {
            resolution: 10.0,
            seed: 0,
            workers: 1,
            no_prune: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Pruned {
    pub partition: Option<CommunityPartition>,
    pub graph: Graph,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct ScoreRun {
    pub variant: Variant,
    pub scores: Vec<GargAmlScore>,
    pub seconds: f64,
}

pub fn prune(g: &Graph, cfg: &ScoreConfig) -> Pruned {
    prune_until(g, cfg, None).expect("no deadline set")
}

pub fn prune_until(g: &Graph, cfg: &ScoreConfig, deadline: Option<Instant>) -> Option<Pruned> {
    let start = Instant::now();
    if cfg.no_prune {
        return Some(Pruned {
            partition: None,
            graph: g.clone(),
            seconds: 0.0,
        });
    }
    let partition = louvain_until(g, cfg.resolution, cfg.seed, deadline)?;
    let graph = prune_inter_community(g, &partition);
    Some(Pruned {
        partition: Some(partition),
        graph,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn score_pruned_until(
    pruned: &Pruned,
    variant: Variant,
    cfg: &ScoreConfig,
    deadline: Option<Instant>,
) -> Option<ScoreRun> {
    let start = Instant::now();
    let scores = score_all_until(&pruned.graph, variant, cfg.workers, deadline)?;
    Some(ScoreRun {
        variant,
        scores,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Prunes `g` and scores it in one call.
pub fn garg_aml(g: &Graph, variant: Variant, cfg: &ScoreConfig) -> ScoreRun {
    garg_aml_until(g, variant, cfg, None).expect("no deadline set")
}

pub fn garg_aml_until(g: &Graph, variant: Variant, cfg: &ScoreConfig, deadline: Option<Instant>) -> Option<ScoreRun> {
    let pruned = prune_until(g, cfg, deadline)?;
    let mut run = score_pruned_until(&pruned, variant, cfg, deadline)?;
    run.seconds += pruned.seconds;
    Some(run)
}
