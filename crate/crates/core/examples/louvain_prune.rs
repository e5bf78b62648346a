// SPDX-License-Identifier: Apache-2.0

//! How the resolution parameter changes the communities found on a planted
//! three-block graph, and how many edges pruning keeps.

use gargaml::community::{louvain, prune_inter_community};
use gargaml::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut edges = Vec::new();
    for u in 0..60u32 {
        for v in u + 1..60 {
            let p = if u / 20 == v / 20 { 0.4 } else { 0.02 };
            if rng.random_bool(p) {
                edges.push(if rng.random_bool(0.5) { (u, v) } else { (v, u) });
            }
        }
    }
    let g = Graph::from_edges(60, edges, true);
    println!("{} nodes, {} directed edges", g.node_count(), g.edge_count());
    println!(
        "{:>10} {:>12} {:>11} {:>12}",
        "resolution", "communities", "modularity", "kept edges"
    );
    for resolution in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let p = louvain(&g, resolution, 0);
        let pruned = prune_inter_community(&g, &p);
        println!(
            "{resolution:>10} {:>12} {:>11.4} {:>12}",
            p.community_count,
            p.modularity,
            pruned.edge_count()
        );
    }
}
