// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::pipeline::{garg_aml_until, ScoreConfig};
use crate::scoring::{GargAmlScore, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    OutOfTime,
    OutOfMemory,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::OutOfTime => "out_of_time",
            Status::OutOfMemory => "out_of_memory",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub method: String,
    pub dataset: String,
    pub nodes: usize,
    pub edges: usize,
    pub workers: usize,
    /// Seconds. Runs that hit the budget report the budget itself.
    pub wall_clock: f64,
    /// Process high-water resident set in bytes, when the OS reports it.
    pub peak_memory: Option<u64>,
    pub status: Status,
}

fn status_field(key: &str) -> Option<u64> {
    let text = fs::read_to_string("/proc/self/status").ok()?;
    let line = text.lines().find(|l| l.starts_with(key))?;
    let kb: u64 = line[key.len()..].trim().trim_end_matches("kB").trim().parse().ok()?;
    Some(kb * 1024)
}

/// Peak resident memory of this process in bytes (Linux only).
pub fn peak_memory() -> Option<u64> {
    status_field("VmHWM:")
}

/// Resets the peak-memory counter where the kernel allows it.
pub fn reset_peak_memory() -> bool {
    fs::write("/proc/self/clear_refs", "5").is_ok()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchOptions {
    /// Wall-clock budget; `None` is unlimited.
    pub budget: Option<Duration>,
    /// Peak-memory budget in bytes, checked after the run.
    pub memory_budget: Option<u64>,
}

pub fn method_name(variant: Variant) -> String {
    format!("garg-aml-{variant}")
}

/// Times the full pipeline (communities, pruning, scoring) for one variant.
pub fn benchmark(
    g: &Graph,
    dataset: &str,
    variant: Variant,
    cfg: &ScoreConfig,
    opts: BenchOptions,
) -> (TimingRecord, Option<Vec<GargAmlScore>>) {
    reset_peak_memory();
    let start = Instant::now();
    let deadline = opts.budget.map(|b| start + b);
    let run = garg_aml_until(g, variant, cfg, deadline);
    let elapsed = start.elapsed();
    let peak = peak_memory();
    let timed_out = run.is_none() || opts.budget.is_some_and(|b| elapsed > b);
    let (status, wall_clock) = if timed_out {
        (Status::OutOfTime, opts.budget.unwrap_or(elapsed).as_secs_f64())
    } else if matches!((opts.memory_budget, peak), (Some(limit), Some(p)) if p > limit) {
        (Status::OutOfMemory, elapsed.as_secs_f64())
    } else {
        (Status::Ok, elapsed.as_secs_f64())
    };
    let record = TimingRecord {
        method: method_name(variant),
        dataset: dataset.to_owned(),
        nodes: g.node_count(),
        edges: g.edge_count(),
        workers: cfg.workers,
        wall_clock,
        peak_memory: peak,
        status,
    };
    let scores = match status {
        Status::Ok => run.map(|r| r.scores),
        _ => None,
    };
    (record, scores)
}
