// SPDX-License-Identifier: Apache-2.0

//! Detection metrics, method ranking and runtime measurement, with plain
//! CSV writers for each table.

pub mod bench;
pub mod metrics;
pub mod rank;

use std::collections::BTreeMap;
use std::io::{BufWriter, Write};

use serde::{Deserialize, Serialize};

pub use bench::{benchmark, peak_memory, reset_peak_memory, BenchOptions, Status, TimingRecord};
pub use metrics::{auc_pr, auc_roc, compute_metrics, Metric, MetricSet};
pub use rank::{critical_difference, friedman_q, nemenyi_q05, rank_methods, rank_row, RankReport, NEMENYI_Q05};

/// Outcome of one method on one labelling of one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub dataset: String,
    /// Which labels were used, e.g. `separate` or `label_0.1`.
    pub target: String,
    pub method: String,
    pub metrics: Option<MetricSet>,
    /// Why `metrics` is missing, or a warning about them.
    pub note: Option<String>,
}

/// Dataset-by-method table of `metric` for one target, in first-seen dataset
/// order. Missing or failed entries count as 0.
pub fn metric_table(
    records: &[EvalRecord],
    target: &str,
    methods: &[String],
    metric: Metric,
) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut datasets: Vec<String> = Vec::new();
    let mut cells: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for r in records.iter().filter(|r| r.target == target) {
        let Some(j) = methods.iter().position(|m| *m == r.method) else {
            continue;
        };
        let i = match datasets.iter().position(|d| *d == r.dataset) {
            Some(i) => i,
            None => {
                datasets.push(r.dataset.clone());
                datasets.len() - 1
            }
        };
        cells.insert((i, j), r.metrics.map_or(0.0, |m| m.get(metric)));
    }
    let table = (0..datasets.len())
        .map(|i| {
            (0..methods.len())
                .map(|j| cells.get(&(i, j)).copied().unwrap_or(0.0))
                .collect()
        })
        .collect();
    (datasets, table)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_owned(), |x| x.to_string())
}

/// `dataset,target,method,precision,recall,f1,auc_roc,auc_pr,threshold,no_positive_predictions,note`.
/// Undefined values are written as `NA`.
pub fn write_metrics<W: Write>(out: W, records: &[EvalRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(out));
    w.write_record([
        "dataset",
        "target",
        "method",
        "precision",
        "recall",
        "f1",
        "auc_roc",
        "auc_pr",
        "threshold",
        "no_positive_predictions",
        "note",
    ])?;
    for r in records {
        let mut row = vec![r.dataset.clone(), r.target.clone(), r.method.clone()];
        match &r.metrics {
            Some(m) => row.extend([
                m.precision.to_string(),
                m.recall.to_string(),
                m.f1.to_string(),
                opt(m.auc_roc),
                opt(m.auc_pr),
                m.threshold.to_string(),
                (m.no_positive_predictions as u8).to_string(),
            ]),
            None => row.extend(std::iter::repeat_n("NA".to_owned(), 7)),
        }
        row.push(r.note.clone().unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `method,average_rank`, best first.
pub fn write_ranks<W: Write>(out: W, report: &RankReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(out));
    w.write_record(["method", "average_rank"])?;
    let mut order: Vec<usize> = (0..report.k).collect();
    order.sort_by(|&a, &b| report.average_ranks[a].total_cmp(&report.average_ranks[b]));
    for j in order {
        w.write_record([report.methods[j].clone(), report.average_ranks[j].to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `method,dataset,nodes,edges,workers,wall_clock,peak_memory,status`.
pub fn write_timings<W: Write>(out: W, records: &[TimingRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(out));
    w.write_record([
        "method",
        "dataset",
        "nodes",
        "edges",
        "workers",
        "wall_clock",
        "peak_memory",
        "status",
    ])?;
    for r in records {
        w.write_record([
            r.method.clone(),
            r.dataset.clone(),
            r.nodes.to_string(),
            r.edges.to_string(),
            r.workers.to_string(),
            r.wall_clock.to_string(),
            r.peak_memory.map_or_else(|| "NA".to_owned(), |b| b.to_string()),
            r.status.as_str().to_owned(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
