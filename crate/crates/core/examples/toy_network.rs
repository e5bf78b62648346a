// SPDX-License-Identifier: Apache-2.0

//! Scores the 24-node worked example: a ring lattice with one scatter-gather
//! pattern (23 -> {20, 21, 22} -> 19) attached.

use gargaml::graph::Graph;
use gargaml::ingest::parse_edge_list;
use gargaml::scoring::{assign_levels, score_directed, score_undirected, Blocks};

const TOY: &str = include_str!("../data/toy_network.csv");

fn main() -> gargaml::Result<()> {
    let edges = parse_edge_list(TOY.as_bytes(), "toy_network.csv".as_ref())?;
    let directed = Graph::from_edges(0, edges, true);
    let undirected = directed.undirected_view();

    for v in [23, 8] {
        let u = score_undirected(&undirected, v);
        if let Blocks::Undirected(b) = u.blocks {
            println!(
                "node {v:>2} undirected {:+.4}  s1={:.3} s2={:.3} s3={:.3}  sizes {}/{}/{}",
                u.score, b.s1, b.s2, b.s3, b.l1, b.l2, b.l3
            );
        }
        let d = score_directed(&directed, v);
        let lv = assign_levels(&directed, v);
        println!(
            "node {v:>2} directed   {:+.4}  levels {:?} {:?} {:?}",
            d.score, lv.level0, lv.level1, lv.level2
        );
        if let Blocks::Directed(b) = d.blocks {
            for row in b.density {
                println!("           [{:.4} {:.4} {:.4}]", row[0], row[1], row[2]);
            }
        }
    }
    Ok(())
}
