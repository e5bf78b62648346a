// SPDX-License-Identifier: Apache-2.0

//! Compressed adjacency for simple transaction graphs.
//!
//! A [`Graph`] is immutable once built: parallel edges collapse to one,
//! self-loops are dropped, and node ids are dense in `[0, node_count)`.
//! Directed graphs keep successor, predecessor and symmetrized neighbour
//! lists so that both the directed and the undirected view can be queried
//! without rebuilding.

use std::collections::VecDeque;

pub type NodeId = u32;

/// Compressed sparse rows: `targets[offsets[v]..offsets[v + 1]]` is sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Csr {
    fn from_sorted_pairs(node_count: usize, pairs: &[(NodeId, NodeId)]) -> Self {
        let mut offsets = vec![0usize; node_count + 1];
        for &(u, _) in pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.iter().map(|&(_, v)| v).collect();
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    directed: bool,
    edge_count: usize,
    /// Successors (directed) or neighbours (undirected).
    out: Csr,
    /// Predecessors; empty for undirected graphs.
    inc: Csr,
    /// Union of successors and predecessors; empty for undirected graphs.
    both: Csr,
}

impl Graph {
    /// Builds a simple graph over `node_count` nodes. The node count grows
    /// to cover every id that appears in `edges`.
    pub fn from_edges<I>(node_count: usize, edges: I, directed: bool) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut node_count = node_count;
        let mut pairs: Vec<(NodeId, NodeId)> = edges
            .into_iter()
            .inspect(|&(u, v)| node_count = node_count.max(u.max(v) as usize + 1))
            .filter(|(u, v)| u != v)
            .map(|(u, v)| if directed || u < v { (u, v) } else { (v, u) })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let edge_count = pairs.len();

        if directed {
            let out = Csr::from_sorted_pairs(node_count, &pairs);
            let mut rev: Vec<(NodeId, NodeId)> = pairs.iter().map(|&(u, v)| (v, u)).collect();
            drop(pairs);
            rev.sort_unstable();
            let inc = Csr::from_sorted_pairs(node_count, &rev);
            drop(rev);
            let both = merge_rows(node_count, &out, &inc);
            Graph {
                node_count,
                directed,
                edge_count,
                out,
                inc,
                both,
            }
        } else {
            let mut sym = Vec::with_capacity(pairs.len() * 2);
            for &(u, v) in &pairs {
                sym.push((u, v));
                sym.push((v, u));
            }
            drop(pairs);
            sym.sort_unstable();
            Graph {
                node_count,
                directed,
                edge_count,
                out: Csr::from_sorted_pairs(node_count, &sym),
                inc: Csr::default(),
                both: Csr::default(),
            }
        }
    }

    pub fn empty(node_count: usize, directed: bool) -> Self {
        Self::from_edges(node_count, std::iter::empty(), directed)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Number of distinct edges; an undirected edge counts once.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        0..self.node_count as NodeId
    }

    pub fn successors(&self, v: NodeId) -> &[NodeId] {
        self.out.row(v)
    }

    pub fn predecessors(&self, v: NodeId) -> &[NodeId] {
        if self.directed {
            self.inc.row(v)
        } else {
            self.out.row(v)
        }
    }

    /// Neighbours in the undirected view, sorted and without duplicates.
    pub fn neighbours(&self, v: NodeId) -> &[NodeId] {
        if self.directed {
            self.both.row(v)
        } else {
            self.out.row(v)
        }
    }

    /// Degree in the undirected view.
    pub fn degree(&self, v: NodeId) -> usize {
        self.neighbours(v).len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        (u as usize) < self.node_count && self.out.row(u).binary_search(&v).is_ok()
    }

    /// Edges in ascending order; undirected edges are reported once as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        let directed = self.directed;
        self.nodes().flat_map(move |u| {
            self.out
                .row(u)
                .iter()
                .copied()
                .filter(move |&v| directed || u < v)
                .map(move |v| (u, v))
        })
    }

    /// Symmetrized copy: `(u, v)` is present iff `(u, v)` or `(v, u)` was.
    pub fn undirected_view(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let mut out = self.both.clone();
        // Rows of `both` are already sorted and deduplicated.
        out.targets.shrink_to_fit();
        let edge_count = out.targets.len() / 2;
        Graph {
            node_count: self.node_count,
            directed: false,
            edge_count,
            out,
            inc: Csr::default(),
            both: Csr::default(),
        }
    }

    /// Keeps only the edges accepted by `keep`, preserving orientation.
    pub fn filter_edges<F>(&self, mut keep: F) -> Graph
    where
        F: FnMut(NodeId, NodeId) -> bool,
    {
        let kept: Vec<_> = self.edges().filter(|&(u, v)| keep(u, v)).collect();
        Graph::from_edges(self.node_count, kept, self.directed)
    }
}

fn merge_rows(node_count: usize, a: &Csr, b: &Csr) -> Csr {
    let mut offsets = Vec::with_capacity(node_count + 1);
    let mut targets = Vec::with_capacity(a.targets.len() + b.targets.len());
    offsets.push(0);
    for v in 0..node_count as NodeId {
        let (x, y) = (a.row(v), b.row(v));
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            let next = match (x.get(i), y.get(j)) {
                (Some(&p), Some(&q)) if p == q => {
                    i += 1;
                    j += 1;
                    p
                }
                (Some(&p), Some(&q)) if p < q => {
                    i += 1;
                    p
                }
                (Some(_), Some(&q)) => {
                    j += 1;
                    q
                }
                (Some(&p), None) => {
                    i += 1;
                    p
                }
                (None, Some(&q)) => {
                    j += 1;
                    q
                }
                (None, None) => unreachable!(),
            };
            targets.push(next);
        }
        offsets.push(targets.len());
    }
    targets.shrink_to_fit();
    Csr { offsets, targets }
}

/// Builds a graph whose node count is one past the largest id seen.
pub fn build_graph<I>(edges: I, directed: bool) -> Graph
where
    I: IntoIterator<Item = (NodeId, NodeId)>,
{
    Graph::from_edges(0, edges, directed)
}

/// Second-order neighbourhood of a node with its induced edge set.
///
/// `first_order` and `second_order` are the nodes at undirected distance
/// exactly one and exactly two, both sorted ascending. `induced_edges` holds
/// every edge of the source graph with both endpoints in
/// `{center} ∪ first_order ∪ second_order`, in the source orientation for
/// directed graphs and as `(u, v)` with `u < v` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbourhood {
    pub center: NodeId,
    pub first_order: Vec<NodeId>,
    pub second_order: Vec<NodeId>,
    pub induced_edges: Vec<(NodeId, NodeId)>,
    pub directed: bool,
}

impl Neighbourhood {
    /// `n` in the block formulas.
    pub fn n(&self) -> usize {
        self.first_order.len()
    }

    /// `m` in the block formulas: the center plus its second-order nodes.
    pub fn m(&self) -> usize {
        self.second_order.len() + 1
    }
}

/// Reusable per-worker marks so extraction costs O(neighbourhood) rather than O(V).
#[derive(Debug, Clone)]
pub struct NeighbourhoodScratch {
    dist: Vec<u8>,
    touched: Vec<NodeId>,
}

const UNSEEN: u8 = u8::MAX;

impl NeighbourhoodScratch {
    pub fn new(node_count: usize) -> Self {
        NeighbourhoodScratch {
            dist: vec![UNSEEN; node_count],
            touched: Vec::new(),
        }
    }

    fn mark(&mut self, v: NodeId, d: u8) -> bool {
        let slot = &mut self.dist[v as usize];
        if *slot == UNSEEN {
            *slot = d;
            self.touched.push(v);
            true
        } else {
            false
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v as usize] = UNSEEN;
        }
        self.touched.clear();
    }

    /// Extracts the neighbourhood of `v`; see [`second_order_neighbourhood`].
    pub fn extract(&mut self, g: &Graph, v: NodeId) -> Neighbourhood {
        if self.dist.len() < g.node_count() {
            self.dist.resize(g.node_count(), UNSEEN);
        }
        self.mark(v, 0);
        let mut first_order = Vec::with_capacity(g.degree(v));
        for &u in g.neighbours(v) {
            if self.mark(u, 1) {
                first_order.push(u);
            }
        }
        let mut second_order = Vec::new();
        for &u in &first_order {
            for &w in g.neighbours(u) {
                if self.mark(w, 2) {
                    second_order.push(w);
                }
            }
        }
        second_order.sort_unstable();

        let mut induced_edges = Vec::new();
        let directed = g.is_directed();
        let members = std::iter::once(v)
            .chain(first_order.iter().copied())
            .chain(second_order.iter().copied());
        for u in members {
            for &w in g.successors(u) {
                if self.dist[w as usize] != UNSEEN && (directed || u < w) {
                    induced_edges.push((u, w));
                }
            }
        }
        induced_edges.sort_unstable();
        self.reset();

        Neighbourhood {
            center: v,
            first_order,
            second_order,
            induced_edges,
            directed,
        }
    }
}

/// Nodes at undirected distance one and two from `v`, with their induced edges.
/// An isolated node yields empty sets.
pub fn second_order_neighbourhood(g: &Graph, v: NodeId) -> Neighbourhood {
    NeighbourhoodScratch::new(g.node_count()).extract(g, v)
}

/// Nodes at undirected distance exactly two from `v` that `v` reaches by a
/// directed path of length two.
pub fn strong_second_order(g: &Graph, v: NodeId) -> Vec<NodeId> {
    let hood = second_order_neighbourhood(g, v);
    let mut out: Vec<NodeId> = g
        .successors(v)
        .iter()
        .flat_map(|&x| g.successors(x).iter().copied())
        .filter(|w| hood.second_order.binary_search(w).is_ok())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Undirected BFS distances from `source`, truncated at `max_depth`.
pub fn bfs_distances(g: &Graph, source: NodeId, max_depth: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    let mut queue = VecDeque::new();
    dist[source as usize] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let d = dist[u as usize].unwrap();
        if d == max_depth {
            continue;
        }
        for &w in g.neighbours(u) {
            if dist[w as usize].is_none() {
                dist[w as usize] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_build_drops_self_loops() {
        let g = build_graph([(0, 1), (1, 0), (2, 2)], true);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn undirected_build_deduplicates() {
        let g = build_graph([(0, 1), (0, 1), (1, 0)], false);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(g.neighbours(1), &[0]);
    }

    #[test]
    fn undirected_view_symmetrizes() {
        let g = build_graph([(0, 1), (1, 0)], true);
        assert_eq!(g.undirected_view().edges().collect::<Vec<_>>(), vec![(0, 1)]);
        let g = build_graph([(0, 1), (1, 2)], true);
        let u = g.undirected_view();
        assert!(!u.is_directed());
        assert_eq!(u.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(u.neighbours(1), &[0, 2]);
    }

    #[test]
    fn isolated_node_has_empty_neighbourhood() {
        let g = Graph::from_edges(4, [(0, 1)], false);
        let hood = second_order_neighbourhood(&g, 3);
        assert!(hood.first_order.is_empty());
        assert!(hood.second_order.is_empty());
        assert!(hood.induced_edges.is_empty());
        assert_eq!(hood.m(), 1);
    }

    #[test]
    fn strong_second_order_follows_direction() {
        // A -> B -> C
        let g = build_graph([(0, 1), (1, 2)], true);
        assert_eq!(strong_second_order(&g, 0), vec![2]);
        assert!(strong_second_order(&g, 2).is_empty());
    }

    #[test]
    fn node_at_distance_one_is_not_second_order() {
        // triangle 0-1-2 plus tail 2-3: node 2 is reachable from 0 in two hops
        // but sits at distance one.
        let g = build_graph([(0, 1), (1, 2), (0, 2), (2, 3)], false);
        let hood = second_order_neighbourhood(&g, 0);
        assert_eq!(hood.first_order, vec![1, 2]);
        assert_eq!(hood.second_order, vec![3]);
        assert_eq!(hood.induced_edges, vec![(0, 1), (0, 2), (1, 2), (2, 3)]);
    }

    #[test]
    fn filter_edges_keeps_orientation() {
        let g = build_graph([(0, 1), (2, 1), (2, 3)], true);
        let f = g.filter_edges(|u, _| u == 2);
        assert_eq!(f.node_count(), 4);
        assert_eq!(f.edges().collect::<Vec<_>>(), vec![(2, 1), (2, 3)]);
    }
}
