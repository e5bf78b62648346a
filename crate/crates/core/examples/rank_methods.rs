// SPDX-License-Identifier: Apache-2.0

//! Evaluates all six methods on a handful of small synthetic datasets and
//! ranks them with the Friedman test and Nemenyi critical difference.

use gargaml::eval::Metric;
use gargaml::experiment::{evaluate_target, rank_reports, score_dataset, EvalConfig};
use gargaml::ml::Method;
use gargaml::synthgen::{generate_dataset, GenSpec, Model, PatternTag};

fn main() -> gargaml::Result<()> {
    let cfg = EvalConfig::default();
    let mut records = Vec::new();
    for (i, model) in [
        Model::Ba { m: 1 },
        Model::Ba { m: 2 },
        Model::Ws { m: 2, p: 0.01 },
        Model::Er { p: 0.001 },
    ]
    .into_iter()
    .enumerate()
    {
        let spec = GenSpec::new(model, 2_000, 5, i as u64)?;
        let ds = generate_dataset(&spec)?;
        let sg = score_dataset(&spec.name(), &ds.graph, &Method::ALL, &cfg.score);
        records.extend(evaluate_target(
            &sg,
            "separate",
            &ds.labels_for(PatternTag::Separate),
            &Method::ALL,
            &cfg,
        ));
    }

    for (target, metric, report) in rank_reports(&records, &Method::ALL) {
        if metric != Metric::AucRoc {
            continue;
        }
        println!(
            "{target}, {}: Q = {:.3} (p = {:.4}), CD = {:.3}",
            metric.as_str(),
            report.friedman_q,
            report.p_value,
            report.nemenyi_cd.unwrap_or(f64::NAN)
        );
        let mut order: Vec<usize> = (0..report.k).collect();
        order.sort_by(|&a, &b| report.average_ranks[a].total_cmp(&report.average_ranks[b]));
        for j in order {
            println!("  {:<18} {:.2}", report.methods[j], report.average_ranks[j]);
        }
    }
    Ok(())
}
