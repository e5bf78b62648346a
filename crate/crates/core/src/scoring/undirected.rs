// SPDX-License-Identifier: Apache-2.0

use crate::graph::{second_order_neighbourhood, Graph, Neighbourhood, NodeId};

use super::{density, Blocks, GargAmlScore, UndirectedBlocks};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Center,
    First,
    Second,
}

fn role(hood: &Neighbourhood, u: NodeId) -> Role {
    if u == hood.center {
        Role::Center
    } else if hood.first_order.binary_search(&u).is_ok() {
        Role::First
    } else {
        debug_assert!(hood.second_order.binary_search(&u).is_ok());
        Role::Second
    }
}

/// Block densities of a neighbourhood, read as undirected.
pub fn undirected_blocks(hood: &Neighbourhood) -> UndirectedBlocks {
    let n = hood.n() as u64;
    let m = hood.m() as u64;

    let mut pairs: Vec<(NodeId, NodeId)> = hood.induced_edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    if hood.directed {
        pairs.sort_unstable();
        pairs.dedup();
    }

    // Entry counts inside each block, forced entries excluded.
    let (mut c1, mut c2, mut c3) = (0u64, 0u64, 0u64);
    for &(u, v) in &pairs {
        match (role(hood, u), role(hood, v)) {
            (Role::Second, Role::Second) => c1 += 2,
            (Role::Second, Role::First) | (Role::First, Role::Second) => c2 += 1,
            (Role::First, Role::First) => c3 += 2,
            // center row of block2 is all ones by construction
            _ => {}
        }
    }

    let l1 = (m - 1) * m.saturating_sub(2);
    let l2 = (m - 1) * n;
    let l3 = n * n.saturating_sub(1);
    UndirectedBlocks {
        s1: density(c1, l1),
        s2: density(c2, l2),
        s3: density(c3, l3),
        l1,
        l2,
        l3,
        n,
        m,
    }
}

/// Undirected score of `v`. Directed graphs are read through their undirected view.
pub fn score_undirected(g: &Graph, v: NodeId) -> GargAmlScore {
    let blocks = undirected_blocks(&second_order_neighbourhood(g, v));
    GargAmlScore {
        node: v,
        score: blocks.composite(),
        blocks: Blocks::Undirected(blocks),
    }
}
