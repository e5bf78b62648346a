// SPDX-License-Identifier: Apache-2.0

//! Runs the full pipeline on an edge list and prints the highest-scoring nodes.
//!
//! ```text
//! cargo run --release --example score_graph -- path/to/edges.csv [resolution]
//! ```

use std::env;

use gargaml::ingest::read_edge_list;
use gargaml::pipeline::{garg_aml, ScoreConfig};
use gargaml::scoring::Variant;

fn main() -> gargaml::Result<()> {
    let mut args = env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/toy_network.csv").to_owned());
    let resolution = args
        .next()
        .map_or(1.0, |r| r.parse().expect("resolution must be a number"));
    let g = read_edge_list(&path, true)?;
    println!("{path}: {} nodes, {} edges", g.node_count(), g.edge_count());

    let cfg = ScoreConfig {
        resolution,
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        ..ScoreConfig::default()
    };
    for variant in Variant::ALL {
        let run = garg_aml(&g, variant, &cfg);
        let mut ranked: Vec<_> = run.scores.iter().collect();
        ranked.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.node.cmp(&b.node)));
        println!("\n{variant} ({:.3}s), top 10:", run.seconds);
        for s in ranked.iter().take(10) {
            println!("  node {:>6}  {:+.4}", s.node, s.score);
        }
    }
    Ok(())
}
