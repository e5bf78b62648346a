// SPDX-License-Identifier: Apache-2.0

//! Undirected random-graph generators. Each returns edges as `(u, v)` with
//! `u < v`, no duplicates.

use rand::Rng;

use crate::graph::NodeId;

/// Preferential attachment: a star on `m + 1` nodes, then each new node
/// links to `m` distinct targets drawn proportionally to degree.
pub fn barabasi_albert<R: Rng>(n: usize, m: usize, rng: &mut R) -> Vec<(NodeId, NodeId)> {
    assert!(m >= 1 && m < n, "barabasi_albert needs 1 <= m < n");
    let mut edges = Vec::with_capacity(m * (n - m));
    let mut repeated: Vec<NodeId> = Vec::with_capacity(2 * m * (n - m));
    for leaf in 1..=m as NodeId {
        edges.push((0, leaf));
        repeated.extend([0, leaf]);
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for source in (m + 1) as NodeId..n as NodeId {
        targets.clear();
        while targets.len() < m {
            let t = repeated[rng.random_range(0..repeated.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t.min(source), t.max(source)));
        }
        repeated.extend_from_slice(&targets);
        repeated.extend(std::iter::repeat_n(source, m));
    }
    edges.sort_unstable();
    edges
}

/// G(n, p) by geometric skipping over the lower triangle.
pub fn erdos_renyi<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(NodeId, NodeId)> {
    let mut edges = Vec::new();
    if p <= 0.0 || n < 2 {
        return edges;
    }
    if p >= 1.0 {
        for v in 1..n as NodeId {
            edges.extend((0..v).map(|w| (w, v)));
        }
        edges.sort_unstable();
        return edges;
    }
    let expected = (p * (n as f64) * (n as f64 - 1.0) / 2.0) as usize;
    edges.reserve(expected + expected / 64);
    let lp = (1.0 - p).ln();
    let (mut v, mut w): (usize, i64) = (1, -1);
    while v < n {
        let lr = (1.0 - rng.random::<f64>()).ln();
        w += 1 + (lr / lp) as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as NodeId, v as NodeId));
        }
    }
    edges.sort_unstable();
    edges
}

/// Ring lattice where every node links to its `m` nearest neighbours on each
/// side, then each lattice edge `(u, u + j)` is rewired to a uniform new end
/// with probability `p`, avoiding self-loops and duplicates.
pub fn watts_strogatz<R: Rng>(n: usize, m: usize, p: f64, rng: &mut R) -> Vec<(NodeId, NodeId)> {
    assert!(m >= 1 && 2 * m < n, "watts_strogatz needs 1 <= m and 2m < n");
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::with_capacity(2 * m + 2); n];
    for u in 0..n {
        for j in 1..=m {
            let v = (u + j) % n;
            adj[u].push(v as NodeId);
            adj[v].push(u as NodeId);
        }
    }
    for j in 1..=m {
        for u in 0..n {
            let v = ((u + j) % n) as NodeId;
            if rng.random::<f64>() >= p {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let mut w = rng.random_range(0..n) as NodeId;
            while w as usize == u || adj[u].contains(&w) {
                w = rng.random_range(0..n) as NodeId;
            }
            let pos = adj[u].iter().position(|&x| x == v).expect("lattice edge");
            adj[u].swap_remove(pos);
            let back = adj[v as usize].iter().position(|&x| x as usize == u).unwrap();
            adj[v as usize].swap_remove(back);
            adj[u].push(w);
            adj[w as usize].push(u as NodeId);
        }
    }
    let mut edges: Vec<(NodeId, NodeId)> = adj
        .iter()
        .enumerate()
        .flat_map(|(u, ns)| {
            ns.iter()
                .filter(move |&&v| (u as NodeId) < v)
                .map(move |&v| (u as NodeId, v))
        })
        .collect();
    edges.sort_unstable();
    edges
}

/// Gives every undirected edge a uniformly random direction.
pub fn orient<R: Rng>(edges: &mut [(NodeId, NodeId)], rng: &mut R) {
    for e in edges.iter_mut() {
        if rng.random::<bool>() {
            *e = (e.1, e.0);
        }
    }
}
