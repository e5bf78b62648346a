// SPDX-License-Identifier: Apache-2.0

//! One test per acceptance criterion. Each prints a single
//! `PASS`/`FAIL`/`SKIP` line before asserting.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::*;
use gargaml::eval::{auc_pr, auc_roc, benchmark, critical_difference, nemenyi_q05, rank_methods, BenchOptions, Status};
use gargaml::experiment::{evaluate_target, score_dataset, EvalConfig};
use gargaml::graph::{Graph, NodeId};
use gargaml::ingest::{aggregate_labels, load_transactions, ColumnMap, PatternIndex, DEFAULT_CUTOFFS};
use gargaml::ml::{
    build_features, fit_decision_tree, fit_gradient_boost, stratified_indices, BoostParams, Learner, Method, TreeModel,
    TreeParams,
};
use gargaml::pipeline::{garg_aml, ScoreConfig};
use gargaml::scoring::{score_directed, score_undirected, Blocks, Variant};
use gargaml::synthgen::{generate_dataset, read_dataset, GenSpec, Model, PatternTag};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(name: &str, ok: bool, detail: String) {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

#[test]
fn appendix_a_oracle() {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut close = |what: &str, got: f64, want: f64, tol: f64| {
        if (got - want).abs() > tol {
            problems.push(format!("{what} = {got}, expected {want} +/- {tol}"));
        }
    };
    let u = toy_undirected();
    let d = toy_directed();
    close("undirected 23", score_undirected(&u, 23).score, 1.0, 1e-3);
    let s8 = score_undirected(&u, 8);
    close("undirected 8", s8.score, -0.0556, 1e-3);
    let Blocks::Undirected(b) = s8.blocks else {
        unreachable!()
    };
    close("s1", b.s1, 0.4, 5e-3);
    close("s2", b.s2, 0.33, 5e-3);
    close("s3", b.s3, 0.33, 5e-3);
    close("directed 23", score_directed(&d, 23).score, 1.0, 1e-3);
    let d8 = score_directed(&d, 8);
    close("directed 8", d8.score, -0.038, 1e-3);
    let Blocks::Directed(b) = d8.blocks else { unreachable!() };
    let printed = [[0.0, 0.1667, 0.0], [0.5, 0.1667, 0.133], [0.2, 0.2, 0.25]];
    for i in 0..3 {
        for j in 0..3 {
            close(&format!("d{i}{j}"), b.density[i][j], printed[i][j], 5e-3);
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        problems.push(format!("took {elapsed:?}"));
    }
    let ok = problems.is_empty();
    let detail = if ok {
        format!(
            "undirected 8 = {:.4}, directed 8 = {:.4} in {elapsed:?}",
            s8.score, d8.score
        )
    } else {
        problems.join("; ")
    };
    verdict("appendix-a-oracle", ok, detail);
}

#[test]
fn purity() {
    let start = Instant::now();
    let mut problems = Vec::new();
    for k in 2..=10u32 {
        let g = scatter_gather(k);
        for smurf in 1..=k {
            let u = score_undirected(&g, smurf).score;
            let d = score_directed(&g, smurf).score;
            if u != 1.0 || d != 1.0 {
                problems.push(format!("k={k} smurf {smurf}: undirected {u}, directed {d}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = problems.is_empty() && elapsed < Duration::from_secs(1);
    let detail = if ok {
        format!("all smurfs score 1.0 for k in 2..=10 in {elapsed:?}")
    } else {
        format!(
            "{} smurf scores differ from 1.0, first: {}",
            problems.len(),
            problems[0]
        )
    };
    verdict("purity", ok, detail);
}

#[test]
fn brute_force_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut mismatches = Vec::new();
    for graph in 0..200 {
        let n = rng.random_range(1..=10usize);
        let p: f64 = rng.random_range(0.05..0.8);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v)
            .filter(|_| rng.random_bool(p))
            .collect();
        let g = Graph::from_edges(n, edges.iter().map(|&(u, v)| (u as NodeId, v as NodeId)), true);
        let dense = Dense::new(n, &edges, true);
        for v in 0..n {
            let Blocks::Undirected(ub) = score_undirected(&g, v as NodeId).blocks else {
                unreachable!()
            };
            let o = dense.undirected(v);
            let u_ok = [ub.s1, ub.s2, ub.s3] == [o.density(0, 0), o.density(0, 1), o.density(1, 1)];
            let Blocks::Directed(db) = score_directed(&g, v as NodeId).blocks else {
                unreachable!()
            };
            let o = dense.directed(v);
            let d_ok = (0..3).all(|i| (0..3).all(|j| db.density[i][j].to_bits() == o.density(i, j).to_bits()));
            if !(u_ok && d_ok) {
                mismatches.push(format!("graph {graph} node {v}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = mismatches.is_empty() && elapsed < Duration::from_secs(30);
    let detail = if mismatches.is_empty() {
        format!("200 graphs agree bitwise in {elapsed:?}")
    } else {
        format!("{} mismatches, first {}", mismatches.len(), mismatches[0])
    };
    verdict("brute-force-equivalence", ok, detail);
}

/// The full grid written once by the command-line tool, shared by the
/// criteria that need it.
struct Grid {
    exit_code: i32,
    datasets: Vec<String>,
    incomplete: Vec<String>,
    label_rates: BTreeMap<String, f64>,
    root: PathBuf,
}

fn grid() -> &'static Grid {
    static GRID: OnceLock<Grid> = OnceLock::new();
    GRID.get_or_init(|| {
        let root = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-grid");
        let _ = fs::remove_dir_all(&root);
        let exit_code =
            gargaml::cli::main_with_args(["gargaml", "generate", "--grid", "full", "--out", root.to_str().unwrap()]);
        let mut datasets = Vec::new();
        let mut incomplete = Vec::new();
        let mut label_rates = BTreeMap::new();
        for entry in fs::read_dir(&root).unwrap() {
            let path = entry.unwrap().path();
            if !path.is_dir() {
                continue;
            }
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            if !["edges.csv", "labels.csv", "dataset.json"]
                .iter()
                .all(|f| path.join(f).exists())
            {
                incomplete.push(name.clone());
            }
            if let Ok(text) = fs::read_to_string(path.join("labels.csv")) {
                let rows: Vec<&str> = text.lines().skip(1).collect();
                let positive = rows.iter().filter(|r| r.split(',').nth(1) == Some("1")).count();
                label_rates.insert(name.clone(), positive as f64 / rows.len() as f64);
            }
            // The largest graphs are only needed for their labels.
            if name.contains("_n100000_") {
                let _ = fs::remove_file(path.join("edges.csv"));
            }
            datasets.push(name);
        }
        datasets.sort();
        Grid {
            exit_code,
            datasets,
            incomplete,
            label_rates,
            root,
        }
    })
}

#[test]
fn grid_cardinality() {
    let g = grid();
    let count = |prefix: &str| g.datasets.iter().filter(|d| d.starts_with(prefix)).count();
    let (ba, er, ws) = (count("ba_"), count("er_"), count("ws_"));
    let ok = g.exit_code == 0 && g.datasets.len() == 66 && (ba, er, ws) == (18, 12, 36) && g.incomplete.is_empty();
    verdict(
        "grid-cardinality",
        ok,
        format!(
            "{} datasets ({ba} BA / {er} ER / {ws} WS), exit {}, incomplete {:?}",
            g.datasets.len(),
            g.exit_code,
            g.incomplete
        ),
    )
}

/// Published label percentages per grid row: model, n, m, p, patterns, percent.
const PUBLISHED_RATES: [(&str, usize, usize, f64, usize, f64); 66] = [
    ("ba", 100, 1, 0.0, 3, 46.9),
    ("ba", 100, 2, 0.0, 3, 60.0),
    ("ba", 100, 5, 0.0, 3, 50.35),
    ("er", 100, 0, 0.001, 3, 52.32),
    ("er", 100, 0, 0.01, 3, 60.78),
    ("ws", 100, 1, 0.001, 3, 48.61),
    ("ws", 100, 1, 0.01, 3, 52.05),
    ("ws", 100, 2, 0.001, 3, 40.46),
    ("ws", 100, 2, 0.01, 3, 52.74),
    ("ws", 100, 5, 0.001, 3, 52.32),
    ("ws", 100, 5, 0.01, 3, 53.1),
    ("ba", 100, 1, 0.0, 5, 70.0),
    ("ba", 100, 2, 0.0, 5, 69.83),
    ("ba", 100, 5, 0.0, 5, 74.29),
    ("er", 100, 0, 0.001, 5, 70.33),
    ("er", 100, 0, 0.01, 5, 65.03),
    ("ws", 100, 1, 0.001, 5, 65.91),
    ("ws", 100, 1, 0.01, 5, 69.74),
    ("ws", 100, 2, 0.001, 5, 70.18),
    ("ws", 100, 2, 0.01, 5, 67.22),
    ("ws", 100, 5, 0.001, 5, 69.01),
    ("ws", 100, 5, 0.01, 5, 66.67),
    ("ba", 10_000, 1, 0.0, 3, 0.69),
    ("ba", 10_000, 2, 0.0, 3, 0.72),
    ("ba", 10_000, 5, 0.0, 3, 0.77),
    ("er", 10_000, 0, 0.001, 3, 0.71),
    ("er", 10_000, 0, 0.01, 3, 0.79),
    ("ws", 10_000, 1, 0.001, 3, 0.84),
    ("ws", 10_000, 1, 0.01, 3, 0.85),
    ("ws", 10_000, 2, 0.001, 3, 0.7),
    ("ws", 10_000, 2, 0.01, 3, 0.85),
    ("ws", 10_000, 5, 0.001, 3, 0.63),
    ("ws", 10_000, 5, 0.01, 3, 0.72),
    ("ba", 10_000, 1, 0.0, 5, 1.15),
    ("ba", 10_000, 2, 0.0, 5, 1.38),
    ("ba", 10_000, 5, 0.0, 5, 1.2),
    ("er", 10_000, 0, 0.001, 5, 1.4),
    ("er", 10_000, 0, 0.01, 5, 1.08),
    ("ws", 10_000, 1, 0.001, 5, 1.13),
    ("ws", 10_000, 1, 0.01, 5, 1.2),
    ("ws", 10_000, 2, 0.001, 5, 1.19),
    ("ws", 10_000, 2, 0.01, 5, 1.24),
    ("ws", 10_000, 5, 0.001, 5, 1.27),
    ("ws", 10_000, 5, 0.01, 5, 1.03),
    ("ba", 100_000, 1, 0.0, 3, 0.07),
    ("ba", 100_000, 2, 0.0, 3, 0.07),
    ("ba", 100_000, 5, 0.0, 3, 0.07),
    ("er", 100_000, 0, 0.001, 3, 0.06),
    ("er", 100_000, 0, 0.01, 3, 0.07),
    ("ws", 100_000, 1, 0.001, 3, 0.08),
    ("ws", 100_000, 1, 0.01, 3, 0.07),
    ("ws", 100_000, 2, 0.001, 3, 0.07),
    ("ws", 100_000, 2, 0.01, 3, 0.08),
    ("ws", 100_000, 5, 0.001, 3, 0.07),
    ("ws", 100_000, 5, 0.01, 3, 0.08),
    ("ba", 100_000, 1, 0.0, 5, 0.11),
    ("ba", 100_000, 2, 0.0, 5, 0.12),
    ("ba", 100_000, 5, 0.0, 5, 0.12),
    ("er", 100_000, 0, 0.001, 5, 0.14),
    ("er", 100_000, 0, 0.01, 5, 0.13),
    ("ws", 100_000, 1, 0.001, 5, 0.11),
    ("ws", 100_000, 1, 0.01, 5, 0.1),
    ("ws", 100_000, 2, 0.001, 5, 0.11),
    ("ws", 100_000, 2, 0.01, 5, 0.11),
    ("ws", 100_000, 5, 0.001, 5, 0.12),
    ("ws", 100_000, 5, 0.01, 5, 0.11),
];

fn spec_of(kind: &str, n: usize, m: usize, p: f64, patterns: usize) -> GenSpec {
    let model = match kind {
        "ba" => Model::Ba { m },
        "er" => Model::Er { p },
        _ => Model::Ws { m, p },
    };
    GenSpec::new(model, n, patterns, 0).unwrap()
}

#[test]
fn label_rate_ranges() {
    let g = grid();
    let mut outside = Vec::new();
    let mut worst: f64 = 0.0;
    for &(kind, n, m, p, patterns, percent) in &PUBLISHED_RATES {
        let name = spec_of(kind, n, m, p, patterns).name();
        let Some(&rate) = g.label_rates.get(&name) else {
            outside.push(format!("{name} missing"));
            continue;
        };
        let rel = rate * 100.0 / percent - 1.0;
        worst = worst.max(rel.abs());
        if rel.abs() > 0.5 {
            outside.push(format!("{name}: {:.3}% vs {percent}%", rate * 100.0));
        }
    }
    verdict(
        "label-rate-ranges",
        outside.is_empty(),
        format!(
            "66 rows, largest relative deviation {:.1}%, outside: {outside:?}",
            worst * 100.0
        ),
    );
}

#[test]
fn detection_power() {
    let g = grid();
    let start = Instant::now();
    let raw = Method {
        learner: Learner::Raw,
        variant: Variant::Undirected,
    };
    let boost = Method {
        learner: Learner::GradientBoost,
        variant: Variant::Undirected,
    };
    let methods = [raw, boost];
    let cfg = EvalConfig::default();
    let mut aucs: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for name in g.datasets.iter().filter(|d| d.contains("_n10000_")) {
        let ds = read_dataset(&g.root.join(name)).unwrap();
        let sg = score_dataset(name, &ds.graph, &methods, &cfg.score);
        let labels = ds.labels_for(PatternTag::Separate);
        for r in evaluate_target(&sg, "separate", &labels, &methods, &cfg) {
            let auc = r.metrics.and_then(|m| m.auc_roc).unwrap_or(0.0);
            aucs.entry(r.method).or_default().push(auc);
        }
    }
    let elapsed = start.elapsed();
    let mean = |m: &Method| {
        let v = &aucs[&m.name()];
        v.iter().sum::<f64>() / v.len() as f64
    };
    let (b, r) = (mean(&boost), mean(&raw));
    let n = aucs[&boost.name()].len();
    let ok = n == 22 && b >= 0.80 && b >= r && elapsed < Duration::from_secs(30 * 60);
    verdict(
        "detection-power",
        ok,
        format!("{n} datasets: boosted undirected {b:.4} vs raw undirected {r:.4} in {elapsed:.1?}"),
    );
}

/// Mann-Whitney statistic by direct pair counting.
fn pairwise_auc(s: &[f64], y: &[bool]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for i in (0..s.len()).filter(|&i| y[i]) {
        for j in (0..s.len()).filter(|&j| !y[j]) {
            pairs += 1.0;
            if s[i] > s[j] {
                wins += 1.0;
            } else if s[i] == s[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

#[test]
fn metric_oracles() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut problems = Vec::new();
    let mut done = 0;
    while done < 100 {
        let n = rng.random_range(2..=50);
        let y: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
        if y.iter().all(|&b| b) || y.iter().all(|&b| !b) {
            continue;
        }
        // Coarse scores so ties occur.
        let s: Vec<f64> = (0..n).map(|_| rng.random_range(0..8) as f64 / 7.0).collect();
        if auc_roc(&s, &y) != pairwise_auc(&s, &y) {
            problems.push(format!(
                "vector {done}: {} vs {}",
                auc_roc(&s, &y),
                pairwise_auc(&s, &y)
            ));
        }
        let base = y.iter().filter(|&&b| b).count() as f64 / n as f64;
        let flat = auc_pr(&vec![0.3; n], &y);
        if (flat - base).abs() > 1e-12 {
            problems.push(format!("constant AUC-PR {flat} vs rate {base}"));
        }
        done += 1;
    }
    let hand = auc_roc(&[0.9, 0.4, 0.6, 0.1], &[true, true, false, false]);
    if hand != 0.75 {
        problems.push(format!("hand example {hand}"));
    }
    let elapsed = start.elapsed();
    let ok = problems.is_empty() && elapsed < Duration::from_secs(10);
    verdict(
        "metric-oracles",
        ok,
        format!("100 vectors, hand example {hand}, {elapsed:?}, problems {problems:?}"),
    );
}

#[test]
fn friedman_oracle() {
    let start = Instant::now();
    let names = |k: usize| (0..k).map(|i| format!("m{i}")).collect::<Vec<_>>();
    let q = rank_methods(&names(3), &[vec![0.9, 0.8, 0.7], vec![0.6, 0.5, 0.4]])
        .unwrap()
        .friedman_q;
    let tied = rank_methods(&names(3), &[vec![0.5; 3], vec![0.2; 3]])
        .unwrap()
        .friedman_q;
    let cd = critical_difference(nemenyi_q05(8).unwrap(), 8, 66);
    let direct = 3.031 * (8.0f64 * 9.0 / (6.0 * 66.0)).sqrt();
    let elapsed = start.elapsed();
    let ok = q == 4.0 && tied == 0.0 && (cd - direct).abs() < 1e-9 && elapsed < Duration::from_secs(1);
    verdict(
        "friedman-oracle",
        ok,
        format!("Q = {q}, tied Q = {tied}, CD = {cd:.6} vs {direct:.6}"),
    );
}

#[test]
fn scalability() {
    let spec = GenSpec::new(Model::Ba { m: 5 }, 100_000, 5, 0).unwrap();
    let g = generate_dataset(&spec).unwrap().graph;
    let opts = BenchOptions {
        budget: Some(Duration::from_secs(30 * 60)),
        memory_budget: Some(8 << 30),
    };
    let mut total = BTreeMap::new();
    let mut peak = 0u64;
    let mut statuses = Vec::new();
    let mut identical = true;
    for variant in Variant::ALL {
        let mut reference = None;
        for workers in [1, 8] {
            let cfg = ScoreConfig {
                workers,
                ..ScoreConfig::default()
            };
            let (rec, scores) = benchmark(&g, &spec.name(), variant, &cfg, opts);
            *total.entry(workers).or_insert(0.0) += rec.wall_clock;
            peak = peak.max(rec.peak_memory.unwrap_or(0));
            statuses.push(rec.status);
            match (&reference, scores) {
                (None, s) => reference = s,
                (Some(r), Some(s)) => identical &= *r == s,
                (Some(_), None) => identical = false,
            }
        }
    }
    let within = total.values().all(|&t| t < 30.0 * 60.0);
    let ok = statuses.iter().all(|&s| s == Status::Ok) && within && peak < 8 << 30 && identical;
    verdict(
        "scalability",
        ok,
        format!(
            "{} nodes, {} edges; both variants {:.1}s at 1 worker, {:.1}s at 8; peak {} MiB; identical {identical}",
            g.node_count(),
            g.edge_count(),
            total[&1],
            total[&8],
            peak >> 20
        ),
    );
}

/// Directory holding `HI-Small_Trans.csv` (and optionally
/// `HI-Small_Patterns.txt`), from `GARGAML_IBM_DIR`.
fn ibm_dir() -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os("GARGAML_IBM_DIR")?);
    dir.join("HI-Small_Trans.csv").exists().then_some(dir)
}

#[test]
fn ingest_rates() {
    let Some(dir) = ibm_dir() else {
        println!("SKIP ingest-rates: set GARGAML_IBM_DIR to a directory containing HI-Small_Trans.csv");
        return;
    };
    let patterns = dir.join("HI-Small_Patterns.txt");
    let index = patterns.exists().then(|| PatternIndex::read(&patterns, b',').unwrap());
    let tx = load_transactions(
        dir.join("HI-Small_Trans.csv"),
        &ColumnMap::amlsim(),
        b',',
        index.as_ref(),
    )
    .unwrap();
    let labels = aggregate_labels(&tx.records, tx.node_count(), &DEFAULT_CUTOFFS).unwrap();
    let rates: Vec<f64> = (0..DEFAULT_CUTOFFS.len()).map(|k| labels.positive_rate(k)).collect();
    let first = rates[0] * 100.0;
    let monotone = rates.windows(2).all(|w| w[1] <= w[0]);
    let ok = (first / 0.445 - 1.0).abs() <= 0.2 && monotone;
    verdict(
        "ingest-rates",
        ok,
        format!("rate at 0.1 = {first:.4}% (published 0.445%), monotone {monotone}, rates {rates:?}"),
    );
}

fn min_leaf(model: &TreeModel) -> usize {
    model
        .trees
        .iter()
        .flat_map(|t| t.leaves().map(|(_, s)| s))
        .min()
        .unwrap()
}

#[test]
fn ml_invariants() {
    let mut problems = Vec::new();
    for seed in 0..5u64 {
        let spec = GenSpec::new(Model::Ba { m: 2 }, 1_000, 5, seed).unwrap();
        let ds = generate_dataset(&spec).unwrap();
        let cfg = ScoreConfig {
            resolution: 1.0,
            ..ScoreConfig::default()
        };
        let scores: Vec<f64> = garg_aml(&ds.graph, Variant::Undirected, &cfg)
            .scores
            .iter()
            .map(|s| s.score)
            .collect();
        let rows = build_features(&ds.graph, &scores, &ds.labels);
        let (train, _) = stratified_indices(&ds.labels, 0.7, seed).unwrap();
        for class in [true, false] {
            let total = ds.labels.iter().filter(|&&b| b == class).count();
            let got = train.iter().filter(|&&i| ds.labels[i] == class).count();
            if (got as f64 - 0.7 * total as f64).abs() > 1.0 {
                problems.push(format!("seed {seed}: {got} of {total} {class} rows in train"));
            }
        }
        let x: Vec<Vec<f64>> = train.iter().map(|&i| rows[i].values()).collect();
        let y: Vec<bool> = train.iter().map(|&i| ds.labels[i]).collect();
        let tree = fit_decision_tree(&x, &y, TreeParams::default());
        let (boost, trace) = fit_gradient_boost(&x, &y, BoostParams::default()).unwrap();
        for (kind, model) in [("tree", &tree), ("boost", &boost)] {
            if min_leaf(model) < 10 {
                problems.push(format!("seed {seed}: {kind} leaf with {} samples", min_leaf(model)));
            }
        }
        if trace.len() != 101 {
            problems.push(format!("seed {seed}: {} loss values", trace.len()));
        }
        if let Some(stage) = trace.windows(2).position(|w| w[1] > w[0]) {
            problems.push(format!("seed {seed}: loss rose at stage {}", stage + 1));
        }
    }
    verdict(
        "ml-invariants",
        problems.is_empty(),
        format!("5 datasets, leaves >= 10, 100-stage loss non-increasing, split within 1; problems {problems:?}"),
    );
}
