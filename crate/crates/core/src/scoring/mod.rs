// SPDX-License-Identifier: Apache-2.0

//! Per-node smurfing scores from block densities of the ordered adjacency
//! matrix of a node's second-order neighbourhood.
//!
//! Densities are counted from the neighbourhood's induced edge set; the
//! `(m + n)²` matrix is never materialized. Each block's density is the
//! fraction of its *free* entries (those not fixed by construction) that
//! hold an edge. A block without free entries has density 0.

mod directed;
mod format;
mod undirected;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NeighbourhoodScratch, NodeId};

pub use directed::{assign_levels, directed_blocks, score_directed, Levels};
pub use format::{read_scores, write_scores};
pub use undirected::{score_undirected, undirected_blocks};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Undirected,
    Directed,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Undirected, Variant::Directed];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Undirected => "undirected",
            Variant::Directed => "directed",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Variant {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "undirected" | "u" => Ok(Variant::Undirected),
            "directed" | "d" => Ok(Variant::Directed),
            other => Err(crate::Error::InvalidArgument(format!("unknown variant `{other}`"))),
        }
    }
}

/// Three-block summary for the undirected score.
///
/// Node order is center, then second-order nodes, then first-order nodes.
/// `block1` is the `m × m` upper-left block, `block2` the `m × n` upper-right
/// block and `block3` the `n × n` lower-right block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UndirectedBlocks {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    /// Free entries of block1: `m² − 3m + 2`.
    pub l1: u64,
    /// Free entries of block2: `mn − n`.
    pub l2: u64,
    /// Free entries of block3: `n² − n`.
    pub l3: u64,
    pub n: u64,
    pub m: u64,
}

impl UndirectedBlocks {
    /// `s2` minus the size-weighted mean of `s1` and `s3`. A neighbourhood
    /// without second-order nodes carries no evidence and scores 0.
    pub fn composite(&self) -> f64 {
        if self.l2 == 0 {
            return 0.0;
        }
        let weight = self.l1 + self.l3;
        let sparse = if weight == 0 {
            0.0
        } else {
            (self.l1 as f64 * self.s1 + self.l3 as f64 * self.s3) / weight as f64
        };
        self.s2 - sparse
    }
}

/// Nine-block summary for the directed score, indexed `[row level][column level]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectedBlocks {
    pub density: [[f64; 3]; 3],
    pub sizes: [[u64; 3]; 3],
    /// Level-0 node count, center included.
    pub l: u64,
    pub n: u64,
    pub m: u64,
}

impl DirectedBlocks {
    /// Mean of the flow blocks (0→1, 1→2) minus the mean of the other seven.
    /// A node without second-order neighbours scores 0.
    pub fn composite(&self) -> f64 {
        if self.l + self.m <= 1 {
            return 0.0;
        }
        let d = &self.density;
        let dense = (d[0][1] + d[1][2]) / 2.0;
        let sparse = (d[0][0] + d[0][2] + d[1][0] + d[1][1] + d[2][0] + d[2][1] + d[2][2]) / 7.0;
        dense - sparse
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum Blocks {
    Undirected(UndirectedBlocks),
    Directed(DirectedBlocks),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GargAmlScore {
    pub node: NodeId,
    pub score: f64,
    pub blocks: Blocks,
}

impl GargAmlScore {
    pub fn variant(&self) -> Variant {
        match self.blocks {
            Blocks::Undirected(_) => Variant::Undirected,
            Blocks::Directed(_) => Variant::Directed,
        }
    }
}

pub(crate) fn density(count: u64, size: u64) -> f64 {
    if size == 0 {
        0.0
    } else {
        count as f64 / size as f64
    }
}

/// Scores every node. Output is indexed by node id and does not depend on
/// `workers` or on the order in which nodes are visited.
pub fn score_all(g: &Graph, variant: Variant, workers: usize) -> Vec<GargAmlScore> {
    score_all_until(g, variant, workers, None).expect("no deadline set")
}

/// As [`score_all`], giving up with `None` once `deadline` has passed.
pub fn score_all_until(
    g: &Graph,
    variant: Variant,
    workers: usize,
    deadline: Option<Instant>,
) -> Option<Vec<GargAmlScore>> {
    // Convert once rather than per node.
    let converted;
    let g = match (variant, g.is_directed()) {
        (Variant::Undirected, true) => {
            converted = g.undirected_view();
            &converted
        }
        (Variant::Directed, false) => {
            converted = Graph::from_edges(g.node_count(), g.edges().flat_map(|(u, v)| [(u, v), (v, u)]), true);
            &converted
        }
        _ => g,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("failed to build scoring thread pool");
    let n = g.node_count();
    pool.install(|| {
        (0..n as NodeId)
            .into_par_iter()
            .with_min_len(64)
            .map_init(
                || NeighbourhoodScratch::new(n),
                |scratch, v| {
                    if deadline.is_some_and(|d| Instant::now() >= d) {
                        return None;
                    }
                    let hood = scratch.extract(g, v);
                    let blocks = match variant {
                        Variant::Undirected => Blocks::Undirected(undirected_blocks(&hood)),
                        Variant::Directed => Blocks::Directed(directed_blocks(&hood)),
                    };
                    let score = match &blocks {
                        Blocks::Undirected(b) => b.composite(),
                        Blocks::Directed(b) => b.composite(),
                    };
                    Some(GargAmlScore { node: v, score, blocks })
                },
            )
            .collect()
    })
}

/// Plain score values indexed by node id.
pub fn score_values(scores: &[GargAmlScore]) -> Vec<f64> {
    scores.iter().map(|s| s.score).collect()
}
