// SPDX-License-Identifier: Apache-2.0

//! Loads an AML simulator transaction export, aggregates laundering flags to
//! account labels, and prints the positive rate per cut-off.
//!
//! ```text
//! cargo run --release --example ingest_transactions -- HI-Small_Trans.csv [HI-Small_Patterns.txt]
//! ```

use std::env;

use gargaml::ingest::{aggregate_labels, load_transactions, ColumnMap, PatternIndex, DEFAULT_CUTOFFS};

fn main() -> gargaml::Result<()> {
    let args: Vec<String> = env::args().skip(1).collect();
    let (trans, patterns) = match args.as_slice() {
        [] => {
            let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data/");
            (
                format!("{data}sample_transactions.csv"),
                Some(format!("{data}sample_patterns.txt")),
            )
        }
        [t] => (t.clone(), None),
        [t, p, ..] => (t.clone(), Some(p.clone())),
    };

    let index = patterns.map(|p| PatternIndex::read(p, b',')).transpose()?;
    let tx = load_transactions(&trans, &ColumnMap::amlsim(), b',', index.as_ref())?;
    for e in &tx.skipped {
        eprintln!("line {}: {}", e.line, e.message);
    }
    let g = tx.graph();
    println!(
        "{} accounts, {} transactions, {} edges",
        tx.node_count(),
        tx.records.len(),
        g.edge_count()
    );

    let labels = aggregate_labels(&tx.records, tx.node_count(), &DEFAULT_CUTOFFS)?;
    println!("{:>8} {:>10}", "cut-off", "positive");
    for (k, c) in DEFAULT_CUTOFFS.iter().enumerate() {
        println!("{c:>8} {:>9.3}%", labels.positive_rate(k) * 100.0);
    }
    for (kind, per) in &labels.per_pattern {
        println!(
            "{:<16} {:.3}% at {}",
            kind.as_str(),
            per.positive_rate(0) * 100.0,
            DEFAULT_CUTOFFS[0]
        );
    }
    Ok(())
}
