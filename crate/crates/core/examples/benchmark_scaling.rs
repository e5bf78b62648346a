// SPDX-License-Identifier: Apache-2.0

//! Times the pipeline on Barabási-Albert graphs of growing size.

use std::time::Duration;

use gargaml::eval::{benchmark, BenchOptions};
use gargaml::pipeline::ScoreConfig;
use gargaml::scoring::Variant;
use gargaml::synthgen::{generate_base, GenSpec, Model};

fn main() -> gargaml::Result<()> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let opts = BenchOptions {
        budget: Some(Duration::from_secs(600)),
        memory_budget: None,
    };
    println!(
        "{:>8} {:>9} {:<20} {:>9} {:>10} status",
        "nodes", "edges", "method", "seconds", "peak MiB"
    );
    for n in [1_000, 10_000, 100_000] {
        let spec = GenSpec::new(Model::Ba { m: 5 }, n, 3, 0)?;
        let g = generate_base(&spec)?;
        for variant in Variant::ALL {
            let cfg = ScoreConfig {
                workers,
                ..ScoreConfig::default()
            };
            let (rec, _) = benchmark(&g, &spec.name(), variant, &cfg, opts);
            println!(
                "{:>8} {:>9} {:<20} {:>9.3} {:>10} {}",
                rec.nodes,
                rec.edges,
                rec.method,
                rec.wall_clock,
                rec.peak_memory.map_or("NA".into(), |b| (b >> 20).to_string()),
                rec.status.as_str()
            );
        }
    }
    Ok(())
}
