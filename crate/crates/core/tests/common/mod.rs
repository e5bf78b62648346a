// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

//! Test-only helpers: the worked-example network and a dense-matrix
//! reference for block densities.

use std::path::Path;

use gargaml::graph::{Graph, NodeId};
use gargaml::ingest::parse_edge_list;

pub const TOY_EDGES: &str = include_str!("../../data/toy_network.csv");

pub fn toy_directed() -> Graph {
    let edges = parse_edge_list(TOY_EDGES.as_bytes(), Path::new("toy_network.csv")).unwrap();
    Graph::from_edges(0, edges, true)
}

pub fn toy_undirected() -> Graph {
    let edges = parse_edge_list(TOY_EDGES.as_bytes(), Path::new("toy_network.csv")).unwrap();
    Graph::from_edges(0, edges, false)
}

/// Isolated scatter-gather: sender 0, smurfs `1..=k`, receiver `k + 1`.
pub fn scatter_gather(k: u32) -> Graph {
    let receiver = k + 1;
    let edges = (1..=k).flat_map(|s| [(0, s), (s, receiver)]);
    Graph::from_edges(0, edges, true)
}

/// Counts and free-entry sizes per block, read off a fully materialized
/// ordered adjacency matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseBlocks {
    pub count: Vec<Vec<u64>>,
    pub size: Vec<Vec<u64>>,
}

impl DenseBlocks {
    pub fn density(&self, i: usize, j: usize) -> f64 {
        if self.size[i][j] == 0 {
            0.0
        } else {
            self.count[i][j] as f64 / self.size[i][j] as f64
        }
    }
}

pub struct Dense {
    pub n: usize,
    pub a: Vec<Vec<bool>>,
}

impl Dense {
    pub fn new(n: usize, edges: &[(usize, usize)], directed: bool) -> Self {
        let mut a = vec![vec![false; n]; n];
        for &(u, v) in edges {
            if u != v {
                a[u][v] = true;
                if !directed {
                    a[v][u] = true;
                }
            }
        }
        Dense { n, a }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (u as usize, v as usize)).collect();
        Self::new(g.node_count(), &edges, g.is_directed())
    }

    fn linked(&self, u: usize, v: usize) -> bool {
        self.a[u][v] || self.a[v][u]
    }

    /// First- and second-order sets by exhaustive search.
    pub fn rings(&self, v: usize) -> (Vec<usize>, Vec<usize>) {
        let first: Vec<usize> = (0..self.n).filter(|&u| u != v && self.linked(v, u)).collect();
        let second: Vec<usize> = (0..self.n)
            .filter(|&w| w != v && !first.contains(&w))
            .filter(|&w| first.iter().any(|&u| self.linked(u, w)))
            .collect();
        (first, second)
    }

    fn symmetric(&self, i: usize, j: usize) -> bool {
        self.linked(i, j)
    }

    /// Undirected blocks: order `[v] ++ second ++ first`, blocks over the
    /// index ranges `[0, m)` and `[m, m + n)`.
    pub fn undirected(&self, v: usize) -> DenseBlocks {
        let (first, second) = self.rings(v);
        let order: Vec<usize> = std::iter::once(v).chain(second.clone()).chain(first.clone()).collect();
        let m = second.len() + 1;
        let total = order.len();
        let group = |i: usize| if i < m { 0 } else { 1 };
        let mut count = vec![vec![0u64; 2]; 2];
        let mut size = vec![vec![0u64; 2]; 2];
        for i in 0..total {
            for j in 0..total {
                let (gi, gj) = (group(i), group(j));
                let forced = i == j
                    || (gi == 0 && gj == 0 && (i == 0 || j == 0))
                    || (gi == 0 && gj == 1 && i == 0)
                    || (gi == 1 && gj == 0 && j == 0);
                if forced {
                    continue;
                }
                size[gi][gj] += 1;
                if self.symmetric(order[i], order[j]) {
                    count[gi][gj] += 1;
                }
            }
        }
        DenseBlocks { count, size }
    }

    /// Level of each second-order node: 2 when a directed two-step path
    /// joins it to `v` either way, else 0.
    pub fn levels(&self, v: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let (first, second) = self.rings(v);
        let mut zero = vec![v];
        let mut two = Vec::new();
        for &w in &second {
            let out = (0..self.n).any(|x| self.a[v][x] && self.a[x][w]);
            let back = (0..self.n).any(|x| self.a[w][x] && self.a[x][v]);
            if out || back {
                two.push(w);
            } else {
                zero.push(w);
            }
        }
        (zero, first, two)
    }

    pub fn directed(&self, v: usize) -> DenseBlocks {
        let (zero, first, two) = self.levels(v);
        let order: Vec<usize> = zero.iter().chain(&first).chain(&two).copied().collect();
        let (l, n) = (zero.len(), first.len());
        let level = |i: usize| {
            if i < l {
                0
            } else if i < l + n {
                1
            } else {
                2
            }
        };
        let mut count = vec![vec![0u64; 3]; 3];
        let mut size = vec![vec![0u64; 3]; 3];
        for i in 0..order.len() {
            for j in 0..order.len() {
                let (li, lj) = (level(i), level(j));
                let excluded = i == j
                    || (li == 0 && lj == 0 && (i == 0 || j == 0))
                    || (li == 0 && lj == 2 && i == 0)
                    || (li == 2 && lj == 0 && j == 0);
                if excluded {
                    continue;
                }
                size[li][lj] += 1;
                if self.a[order[i]][order[j]] {
                    count[li][lj] += 1;
                }
            }
        }
        DenseBlocks { count, size }
    }
}

/// Undirected composite from dense blocks, written out longhand.
pub fn undirected_composite(b: &DenseBlocks) -> f64 {
    let (l1, l2, l3) = (b.size[0][0], b.size[0][1], b.size[1][1]);
    if l2 == 0 {
        return 0.0;
    }
    let (s1, s2, s3) = (b.density(0, 0), b.density(0, 1), b.density(1, 1));
    if l1 + l3 == 0 {
        s2
    } else {
        s2 - (l1 as f64 * s1 + l3 as f64 * s3) / (l1 + l3) as f64
    }
}

pub fn directed_composite(b: &DenseBlocks, has_second_order: bool) -> f64 {
    if !has_second_order {
        return 0.0;
    }
    let d = |i, j| b.density(i, j);
    (d(0, 1) + d(1, 2)) / 2.0 - (d(0, 0) + d(0, 2) + d(1, 0) + d(1, 1) + d(2, 0) + d(2, 1) + d(2, 2)) / 7.0
}

pub fn node(v: usize) -> NodeId {
    v as NodeId
}
