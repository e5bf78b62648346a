// SPDX-License-Identifier: Apache-2.0

use crate::graph::{second_order_neighbourhood, Graph, Neighbourhood, NodeId};

use super::{density, Blocks, DirectedBlocks, GargAmlScore};

/// Node levels of a directed neighbourhood. All three lists are sorted;
/// `level0` contains the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Levels {
    pub level0: Vec<NodeId>,
    pub level1: Vec<NodeId>,
    pub level2: Vec<NodeId>,
}

/// Level per neighbourhood node: first-order nodes at 1, second-order nodes
/// joined to the center by a directed two-step path (either way) at 2, the
/// remaining second-order nodes at 0 next to the center.
struct LevelMap<'a> {
    hood: &'a Neighbourhood,
    /// Parallel to `hood.second_order`.
    second_level: Vec<u8>,
}

impl<'a> LevelMap<'a> {
    fn new(hood: &'a Neighbourhood) -> Self {
        let v = hood.center;
        let n = hood.first_order.len();
        let mut from_center = vec![false; n];
        let mut to_center = vec![false; n];
        for &(a, b) in &hood.induced_edges {
            if a == v {
                if let Ok(i) = hood.first_order.binary_search(&b) {
                    from_center[i] = true;
                }
            } else if b == v {
                if let Ok(i) = hood.first_order.binary_search(&a) {
                    to_center[i] = true;
                }
            }
        }

        let mut second_level = vec![0u8; hood.second_order.len()];
        for &(a, b) in &hood.induced_edges {
            // v -> a -> b
            if let (Ok(x), Ok(w)) = (hood.first_order.binary_search(&a), hood.second_order.binary_search(&b)) {
                if from_center[x] {
                    second_level[w] = 2;
                }
            }
            // a -> b -> v
            if let (Ok(w), Ok(x)) = (hood.second_order.binary_search(&a), hood.first_order.binary_search(&b)) {
                if to_center[x] {
                    second_level[w] = 2;
                }
            }
        }
        LevelMap { hood, second_level }
    }

    fn level(&self, u: NodeId) -> usize {
        if u == self.hood.center {
            0
        } else if self.hood.first_order.binary_search(&u).is_ok() {
            1
        } else {
            let w = self
                .hood
                .second_order
                .binary_search(&u)
                .expect("edge endpoint outside neighbourhood");
            self.second_level[w] as usize
        }
    }

    fn counts(&self) -> (u64, u64, u64) {
        let twos = self.second_level.iter().filter(|&&l| l == 2).count() as u64;
        let l = 1 + self.second_level.len() as u64 - twos;
        (l, self.hood.first_order.len() as u64, twos)
    }
}

/// Splits the neighbourhood of `v` into levels 0, 1 and 2.
pub fn assign_levels(g: &Graph, v: NodeId) -> Levels {
    let hood = second_order_neighbourhood(g, v);
    let map = LevelMap::new(&hood);
    let mut level0 = vec![v];
    let mut level2 = Vec::new();
    for (&w, &l) in hood.second_order.iter().zip(&map.second_level) {
        if l == 2 {
            level2.push(w);
        } else {
            level0.push(w);
        }
    }
    level0.sort_unstable();
    Levels {
        level0,
        level1: hood.first_order.clone(),
        level2,
    }
}

/// Nine block densities of a directed neighbourhood.
pub fn directed_blocks(hood: &Neighbourhood) -> DirectedBlocks {
    let map = LevelMap::new(hood);
    let mut counts = [[0u64; 3]; 3];
    for &(a, b) in &hood.induced_edges {
        counts[map.level(a)][map.level(b)] += 1;
    }

    let (l, n, m) = map.counts();
    let others = l - 1;
    // The center's row and column in b00, its row in b02 and its column in
    // b20 are fixed zeros; diagonals of b00, b11, b22 are excluded.
    let sizes = [
        [others * others.saturating_sub(1), l * n, others * m],
        [n * l, n * n.saturating_sub(1), n * m],
        [m * others, m * n, m * m.saturating_sub(1)],
    ];
    let mut dens = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            dens[i][j] = density(counts[i][j], sizes[i][j]);
        }
    }
    DirectedBlocks {
        density: dens,
        sizes,
        l,
        n,
        m,
    }
}

/// Directed score of `v`. An undirected graph is read as having both orientations.
pub fn score_directed(g: &Graph, v: NodeId) -> GargAmlScore {
    let blocks = if g.is_directed() {
        directed_blocks(&second_order_neighbourhood(g, v))
    } else {
        let both = Graph::from_edges(g.node_count(), g.edges().flat_map(|(a, b)| [(a, b), (b, a)]), true);
        directed_blocks(&second_order_neighbourhood(&both, v))
    };
    GargAmlScore {
        node: v,
        score: blocks.composite(),
        blocks: Blocks::Directed(blocks),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn chain_head_scores_one() {
        // A -> B -> C
        let g = build_graph([(0, 1), (1, 2)], true);
        let s = score_directed(&g, 0);
        let Blocks::Directed(b) = s.blocks else { unreachable!() };
        assert_eq!((b.l, b.n, b.m), (1, 1, 1));
        assert_eq!(b.density[0][1], 1.0);
        assert_eq!(b.density[1][2], 1.0);
        assert_eq!(s.score, 1.0);
    }

    #[test]
    fn chain_tail_sits_at_level_two() {
        // reversed path C <- B <- A seen from C still puts A at level 2
        let g = build_graph([(0, 1), (1, 2)], true);
        let lv = assign_levels(&g, 2);
        assert_eq!(lv.level0, vec![2]);
        assert_eq!(lv.level1, vec![1]);
        assert_eq!(lv.level2, vec![0]);
    }

    #[test]
    fn no_directed_path_goes_to_level_zero() {
        // A -> B <- C: C is at distance two with no directed two-step path
        let g = build_graph([(0, 1), (2, 1)], true);
        let lv = assign_levels(&g, 0);
        assert_eq!(lv.level0, vec![0, 2]);
        assert!(lv.level2.is_empty());
    }

    #[test]
    fn paths_both_ways_go_to_level_two() {
        // 0 -> 1 -> 2 and 2 -> 3 -> 0
        let g = build_graph([(0, 1), (1, 2), (2, 3), (3, 0)], true);
        let lv = assign_levels(&g, 0);
        assert_eq!(lv.level2, vec![2]);
    }

    #[test]
    fn isolated_node_is_neutral() {
        let g = Graph::from_edges(3, [(0, 1)], true);
        assert_eq!(score_directed(&g, 2).score, 0.0);
        assert_eq!(score_directed(&g, 0).score, 0.0);
    }
}
