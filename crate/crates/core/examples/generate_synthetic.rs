// SPDX-License-Identifier: Apache-2.0

//! Generates one synthetic dataset per base model and summarises what the
//! injected patterns look like. Pass a directory to also write them out.

use std::env;
use std::path::PathBuf;

use gargaml::synthgen::{generate_dataset, write_dataset, GenSpec, Model, PatternTag};

fn main() -> gargaml::Result<()> {
    let out = env::args().nth(1).map(PathBuf::from);
    let models = [Model::Ba { m: 2 }, Model::Er { p: 0.001 }, Model::Ws { m: 2, p: 0.01 }];
    for model in models {
        let spec = GenSpec::new(model, 10_000, 5, 42)?;
        let ds = generate_dataset(&spec)?;
        println!(
            "{:<24} {:>6} nodes {:>6} edges  labelled {:.2}%",
            spec.name(),
            ds.node_count(),
            ds.graph.edge_count(),
            ds.label_rate() * 100.0
        );
        for mode in PatternTag::MODES {
            let smurfs: Vec<usize> = ds
                .injections
                .iter()
                .filter(|i| i.mode == mode)
                .map(|i| i.mules.len())
                .collect();
            println!("    {mode:<15} smurfs per pattern {smurfs:?}");
        }
        if let Some(dir) = &out {
            write_dataset(&dir.join(spec.name()), &ds)?;
        }
    }
    Ok(())
}
