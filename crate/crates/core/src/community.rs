// SPDX-License-Identifier: Apache-2.0

//! Louvain community detection with a resolution parameter, and removal of
//! edges that cross communities.
//!
//! Modularity at resolution `γ` is
//! `Q = Σ_c [ L_c / m − γ (d_c / 2m)² ]`
//! with `L_c` the edges inside `c`, `d_c` its total degree and `m` the edge
//! count of the undirected view. Larger `γ` yields smaller communities.

use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};

const MAX_LEVELS: usize = 100;
const MAX_SWEEPS: usize = 1_000;
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityPartition {
    /// Community id per node, contiguous from 0.
    pub assignment: Vec<u32>,
    pub community_count: usize,
    pub modularity: f64,
}

impl CommunityPartition {
    /// Relabels arbitrary ids to `0..k`, numbering communities by their lowest node.
    pub fn from_labels(g: &Graph, labels: &[u32], resolution: f64) -> Self {
        let (assignment, community_count) = renumber(labels);
        let modularity = modularity(g, &assignment, resolution);
        CommunityPartition {
            assignment,
            community_count,
            modularity,
        }
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count];
        for &c in &self.assignment {
            sizes[c as usize] += 1;
        }
        sizes
    }
}

fn renumber(labels: &[u32]) -> (Vec<u32>, usize) {
    let mut map = std::collections::HashMap::new();
    let assignment = labels
        .iter()
        .map(|&c| {
            let next = map.len() as u32;
            *map.entry(c).or_insert(next)
        })
        .collect();
    (assignment, map.len())
}

/// Resolution-weighted modularity of `assignment` on the undirected view of `g`.
pub fn modularity(g: &Graph, assignment: &[u32], resolution: f64) -> f64 {
    let m = if g.is_directed() {
        g.nodes().map(|v| g.degree(v)).sum::<usize>() as f64 / 2.0
    } else {
        g.edge_count() as f64
    };
    if m == 0.0 {
        return 0.0;
    }
    let k = assignment.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut inside = vec![0.0f64; k];
    let mut degree = vec![0.0f64; k];
    for v in g.nodes() {
        let cv = assignment[v as usize] as usize;
        degree[cv] += g.degree(v) as f64;
        for &w in g.neighbours(v) {
            if v < w && assignment[w as usize] as usize == cv {
                inside[cv] += 1.0;
            }
        }
    }
    inside
        .iter()
        .zip(&degree)
        .map(|(&l, &d)| l / m - resolution * (d / (2.0 * m)).powi(2))
        .sum()
}

/// Weighted graph for one aggregation level.
struct Level {
    adj: Vec<Vec<(u32, f64)>>,
    /// Weight of edges folded inside each node.
    inner: Vec<f64>,
    /// `2·inner + Σ adj weights`.
    degree: Vec<f64>,
}

impl Level {
    fn from_graph(g: &Graph) -> Self {
        let adj: Vec<Vec<(u32, f64)>> = g
            .nodes()
            .map(|v| g.neighbours(v).iter().map(|&w| (w, 1.0)).collect())
            .collect();
        let degree = adj.iter().map(|a| a.len() as f64).collect();
        Level {
            inner: vec![0.0; adj.len()],
            adj,
            degree,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn aggregate(&self, comm: &[u32], k: usize) -> Level {
        let mut inner = vec![0.0; k];
        let mut maps: Vec<std::collections::BTreeMap<u32, f64>> = vec![Default::default(); k];
        for (i, nbrs) in self.adj.iter().enumerate() {
            let ci = comm[i];
            inner[ci as usize] += self.inner[i];
            for &(j, w) in nbrs {
                let cj = comm[j as usize];
                if ci == cj {
                    // each internal edge is visited from both ends
                    inner[ci as usize] += w / 2.0;
                } else {
                    *maps[ci as usize].entry(cj).or_insert(0.0) += w;
                }
            }
        }
        let adj: Vec<Vec<(u32, f64)>> = maps.into_iter().map(|m| m.into_iter().collect()).collect();
        let degree = adj
            .iter()
            .zip(&inner)
            .map(|(a, &s)| 2.0 * s + a.iter().map(|&(_, w)| w).sum::<f64>())
            .collect();
        Level { adj, inner, degree }
    }
}

/// Runs Louvain on the undirected view of `g`. Node sweep order is shuffled
/// from `seed`; equal gains keep a node where it is, and otherwise go to the
/// lowest community id.
pub fn louvain(g: &Graph, resolution: f64, seed: u64) -> CommunityPartition {
    louvain_until(g, resolution, seed, None).expect("no deadline set")
}

/// As [`louvain`], returning `None` once `deadline` has passed.
pub fn louvain_until(g: &Graph, resolution: f64, seed: u64, deadline: Option<Instant>) -> Option<CommunityPartition> {
    assert!(resolution > 0.0, "resolution must be positive");
    let n = g.node_count();
    let mut assignment: Vec<u32> = (0..n as u32).collect();
    let total_weight = if g.is_directed() {
        g.nodes().map(|v| g.degree(v)).sum::<usize>() as f64 / 2.0
    } else {
        g.edge_count() as f64
    };
    if n == 0 || total_weight == 0.0 {
        return Some(CommunityPartition::from_labels(g, &assignment, resolution));
    }

    let mut rng = crate::rng::stream(seed, "louvain");
    let mut level = Level::from_graph(g);
    for _ in 0..MAX_LEVELS {
        let (comm, moved) = local_moves(&level, resolution, total_weight, &mut rng, deadline)?;
        if !moved {
            break;
        }
        let (comm, k) = renumber(&comm);
        for a in assignment.iter_mut() {
            *a = comm[*a as usize];
        }
        level = level.aggregate(&comm, k);
    }
    Some(CommunityPartition::from_labels(g, &assignment, resolution))
}

/// One Louvain phase: greedy node moves until a sweep changes nothing.
fn local_moves(
    level: &Level,
    resolution: f64,
    m: f64,
    rng: &mut impl rand::Rng,
    deadline: Option<Instant>,
) -> Option<(Vec<u32>, bool)> {
    let n = level.len();
    let mut comm: Vec<u32> = (0..n as u32).collect();
    let mut total = level.degree.clone();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);

    let mut link = vec![0.0f64; n];
    let mut touched: Vec<u32> = Vec::new();
    let mut moved_any = false;

    for _ in 0..MAX_SWEEPS {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return None;
        }
        let mut moved = false;
        for &i in &order {
            let i = i as usize;
            let own = comm[i];
            let ki = level.degree[i];

            for &(j, w) in &level.adj[i] {
                let c = comm[j as usize];
                if link[c as usize] == 0.0 {
                    touched.push(c);
                }
                link[c as usize] += w;
            }
            total[own as usize] -= ki;

            let gain = |c: u32, link: &[f64]| link[c as usize] - resolution * total[c as usize] * ki / (2.0 * m);
            let mut best = own;
            let mut best_gain = gain(own, &link);
            touched.sort_unstable();
            for &c in &touched {
                let g = gain(c, &link);
                if g > best_gain + MIN_GAIN {
                    best = c;
                    best_gain = g;
                }
            }

            total[best as usize] += ki;
            if best != own {
                comm[i] = best;
                moved = true;
            }
            for &c in &touched {
                link[c as usize] = 0.0;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    Some((comm, moved_any))
}

/// Keeps exactly the edges whose endpoints share a community.
pub fn prune_inter_community(g: &Graph, p: &CommunityPartition) -> Graph {
    let a = &p.assignment;
    g.filter_edges(|u: NodeId, v: NodeId| a[u as usize] == a[v as usize])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn two_cliques() -> Graph {
        let mut edges = Vec::new();
        for base in [0u32, 4] {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((3, 4));
        build_graph(edges, false)
    }

    #[test]
    fn two_cliques_split_at_bridge() {
        let g = two_cliques();
        let p = louvain(&g, 1.0, 1);
        assert_eq!(p.community_count, 2);
        assert_eq!(p.assignment, vec![0, 0, 0, 0, 1, 1, 1, 1]);
        let pruned = prune_inter_community(&g, &p);
        assert_eq!(pruned.edge_count(), 12);
        assert!(!pruned.has_edge(3, 4));
    }

    #[test]
    fn edgeless_graph_keeps_singletons() {
        let g = Graph::empty(5, false);
        let p = louvain(&g, 10.0, 0);
        assert_eq!(p.community_count, 5);
        assert_eq!(p.assignment, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn single_community_prune_is_identity() {
        let g = two_cliques();
        let p = CommunityPartition::from_labels(&g, &[9; 8], 1.0);
        assert_eq!(p.community_count, 1);
        assert_eq!(prune_inter_community(&g, &p), g);
    }

    #[test]
    fn modularity_of_two_cliques() {
        // m = 13, each clique: L = 6, d = 13
        let g = two_cliques();
        let q = modularity(&g, &[0, 0, 0, 0, 1, 1, 1, 1], 1.0);
        let expected = 2.0 * (6.0 / 13.0 - (13.0f64 / 26.0).powi(2));
        assert!((q - expected).abs() < 1e-12);
    }

    #[test]
    fn directed_input_uses_undirected_view() {
        let g = two_cliques();
        let d = Graph::from_edges(8, g.edges(), true);
        assert_eq!(louvain(&d, 1.0, 3).assignment, louvain(&g, 1.0, 3).assignment);
    }

    #[test]
    fn same_seed_same_partition() {
        let g = two_cliques();
        assert_eq!(louvain(&g, 2.0, 11), louvain(&g, 2.0, 11));
    }
}
