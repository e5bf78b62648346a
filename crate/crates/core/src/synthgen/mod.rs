// SPDX-License-Identifier: Apache-2.0

//! Synthetic transaction networks with injected scatter-gather patterns.
//!
//! A base graph is drawn from one of three random-graph models and every edge
//! gets a random direction. Each of the three injection modes is then applied
//! `n_patterns` times, in the order separate, new mules, existing mules, with a
//! smurf count drawn uniformly from `2..=10`. Every pattern participant is
//! labelled positive.

mod generators;

use std::fmt;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};
use crate::ingest::{parse_edge_list, write_edge_list};
use crate::rng::stream;
use crate::{Error, Result};

pub use generators::{barabasi_albert, erdos_renyi, orient, watts_strogatz};

pub const MIN_SMURFS: usize = 2;
pub const MAX_SMURFS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Model {
    /// `m` edges per new node.
    Ba { m: usize },
    /// Edge probability `p`.
    Er { p: f64 },
    /// `m` lattice neighbours per side, rewiring probability `p`.
    Ws { m: usize, p: f64 },
}

impl Model {
    pub fn short_name(&self) -> &'static str {
        match self {
            Model::Ba { .. } => "ba",
            Model::Er { .. } => "er",
            Model::Ws { .. } => "ws",
        }
    }

    /// Builds a model from loose parameters, rejecting ones the model does not take.
    pub fn from_parts(kind: &str, m: Option<usize>, p: Option<f64>) -> Result<Model> {
        let bad = |msg: &str| Err(Error::InvalidSpec(format!("{kind}: {msg}")));
        match kind.to_ascii_lowercase().as_str() {
            "ba" | "barabasi-albert" => match (m, p) {
                (Some(m), None) => Ok(Model::Ba { m }),
                (None, _) => bad("needs --m"),
                (_, Some(_)) => bad("takes no edge probability"),
            },
            "er" | "erdos-renyi" => match (m, p) {
                (None, Some(p)) => Ok(Model::Er { p }),
                (_, None) => bad("needs --p"),
                (Some(_), _) => bad("takes no edge count"),
            },
            "ws" | "watts-strogatz" => match (m, p) {
                (Some(m), Some(p)) => Ok(Model::Ws { m, p }),
                _ => bad("needs both --m and --p"),
            },
            _ => Err(Error::InvalidSpec(format!("unknown model `{kind}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub model: Model,
    pub n_nodes: usize,
    pub n_patterns: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(model: Model, n_nodes: usize, n_patterns: usize, seed: u64) -> Result<Self> {
        let spec = GenSpec {
            model,
            n_nodes,
            n_patterns,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_nodes;
        let prob_ok = |p: f64| (0.0..=1.0).contains(&p);
        let problem = match self.model {
            _ if n < 2 => Some("n_nodes must be at least 2".to_owned()),
            Model::Ba { m } if m == 0 || m >= n => Some(format!("BA needs 1 <= m < n, got m={m}")),
            Model::Er { p } if !prob_ok(p) => Some(format!("p={p} outside [0, 1]")),
            Model::Ws { m, .. } if m == 0 || 2 * m >= n => Some(format!("WS needs 1 <= m and 2m < n, got m={m}")),
            Model::Ws { p, .. } if !prob_ok(p) => Some(format!("p={p} outside [0, 1]")),
            _ => None,
        };
        match problem {
            Some(msg) => Err(Error::InvalidSpec(msg)),
            None => Ok(()),
        }
    }

    /// Stable identifier, also used as the dataset directory name. The seed is
    /// not part of it.
    pub fn name(&self) -> String {
        let n = self.n_nodes;
        let k = self.n_patterns;
        match self.model {
            Model::Ba { m } => format!("ba_n{n}_m{m}_pat{k}"),
            Model::Er { p } => format!("er_n{n}_p{p}_pat{k}"),
            Model::Ws { m, p } => format!("ws_n{n}_m{m}_p{p}_pat{k}"),
        }
    }
}

/// Every combination of the published parameter table: 18 BA, 12 ER, 36 WS.
pub fn full_grid(seed: u64) -> Vec<GenSpec> {
    let mut out = Vec::with_capacity(66);
    for n_nodes in [100, 10_000, 100_000] {
        for n_patterns in [3, 5] {
            let mut models = Vec::new();
            models.extend([1, 2, 5].map(|m| Model::Ba { m }));
            models.extend([0.001, 0.01].map(|p| Model::Er { p }));
            for m in [1, 2, 5] {
                models.extend([0.001, 0.01].map(|p| Model::Ws { m, p }));
            }
            out.extend(models.into_iter().map(|model| GenSpec {
                model,
                n_nodes,
                n_patterns,
                seed,
            }));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternTag {
    None,
    Separate,
    NewMules,
    ExistingMules,
}

impl PatternTag {
    pub const MODES: [PatternTag; 3] = [PatternTag::Separate, PatternTag::NewMules, PatternTag::ExistingMules];

    pub fn as_str(self) -> &'static str {
        match self {
            PatternTag::None => "none",
            PatternTag::Separate => "separate",
            PatternTag::NewMules => "new_mules",
            PatternTag::ExistingMules => "existing_mules",
        }
    }
}

impl fmt::Display for PatternTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PatternTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [PatternTag::None]
            .into_iter()
            .chain(PatternTag::MODES)
            .find(|t| t.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown pattern tag `{s}`")))
    }
}

/// One injected scatter-gather pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Injection {
    pub mode: PatternTag,
    pub sender: NodeId,
    pub receiver: NodeId,
    pub mules: Vec<NodeId>,
    /// Nodes the injection appends to the graph.
    pub new_nodes: usize,
}

impl Injection {
    pub fn participants(&self) -> impl Iterator<Item = NodeId> + '_ {
        [self.sender, self.receiver]
            .into_iter()
            .chain(self.mules.iter().copied())
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.mules.iter().flat_map(|&s| [(self.sender, s), (s, self.receiver)])
    }
}

/// Chooses participants for one pattern on a graph with `node_count` nodes.
/// New nodes, if any, are numbered from `node_count` upward.
pub fn plan_injection<R: Rng>(node_count: usize, mode: PatternTag, smurfs: usize, rng: &mut R) -> Result<Injection> {
    if !(MIN_SMURFS..=MAX_SMURFS).contains(&smurfs) {
        return Err(Error::SmurfCount(smurfs));
    }
    let fresh = |from: usize, count: usize| (from..from + count).map(|v| v as NodeId);
    let insufficient = |needed: usize| Error::InsufficientNodes {
        mode: mode.as_str(),
        needed,
        available: node_count,
    };
    match mode {
        PatternTag::Separate => {
            let base = node_count;
            Ok(Injection {
                mode,
                sender: base as NodeId,
                mules: fresh(base + 1, smurfs).collect(),
                receiver: (base + smurfs + 1) as NodeId,
                new_nodes: smurfs + 2,
            })
        }
        PatternTag::NewMules => {
            if node_count < 2 {
                return Err(insufficient(2));
            }
            let ends = index::sample(rng, node_count, 2);
            Ok(Injection {
                mode,
                sender: ends.index(0) as NodeId,
                receiver: ends.index(1) as NodeId,
                mules: fresh(node_count, smurfs).collect(),
                new_nodes: smurfs,
            })
        }
        PatternTag::ExistingMules => {
            if node_count < smurfs + 2 {
                return Err(insufficient(smurfs + 2));
            }
            let picked: Vec<NodeId> = index::sample(rng, node_count, smurfs + 2)
                .into_iter()
                .map(|v| v as NodeId)
                .collect();
            Ok(Injection {
                mode,
                sender: picked[0],
                receiver: picked[1],
                mules: picked[2..].to_vec(),
                new_nodes: 0,
            })
        }
        PatternTag::None => Err(Error::InvalidArgument("`none` is not an injection mode".into())),
    }
}

/// Adds one pattern to `g` and returns the grown graph with the injection.
pub fn inject_pattern(g: &Graph, mode: PatternTag, smurfs: usize, seed: u64) -> Result<(Graph, Injection)> {
    let mut rng = stream(seed, "synthgen/inject");
    let inj = plan_injection(g.node_count(), mode, smurfs, &mut rng)?;
    let edges: Vec<_> = g.edges().chain(inj.edges()).collect();
    let grown = Graph::from_edges(g.node_count() + inj.new_nodes, edges, g.is_directed());
    Ok((grown, inj))
}

/// Draws the base graph of `spec`, oriented.
pub fn generate_base(spec: &GenSpec) -> Result<Graph> {
    spec.validate()?;
    let edges = base_edges(spec);
    Ok(Graph::from_edges(spec.n_nodes, edges, true))
}

fn base_edges(spec: &GenSpec) -> Vec<(NodeId, NodeId)> {
    let mut rng = stream(spec.seed, &format!("synthgen/{}/base", spec.name()));
    let n = spec.n_nodes;
    let mut edges = match spec.model {
        Model::Ba { m } => barabasi_albert(n, m, &mut rng),
        Model::Er { p } => erdos_renyi(n, p, &mut rng),
        Model::Ws { m, p } => watts_strogatz(n, m, p, &mut rng),
    };
    orient(&mut edges, &mut rng);
    edges
}

#[derive(Debug, Clone)]
pub struct SyntheticDataset {
    pub spec: GenSpec,
    pub graph: Graph,
    pub labels: Vec<bool>,
    /// A node taking part in several patterns keeps the tag of the first one.
    pub tags: Vec<PatternTag>,
    pub injections: Vec<Injection>,
}

impl SyntheticDataset {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn label_rate(&self) -> f64 {
        if self.labels.is_empty() {
            return 0.0;
        }
        self.labels.iter().filter(|&&b| b).count() as f64 / self.labels.len() as f64
    }

    /// Binary labels for one injection mode: participants of that mode only.
    pub fn labels_for(&self, mode: PatternTag) -> Vec<bool> {
        let mut out = vec![false; self.node_count()];
        for inj in self.injections.iter().filter(|i| i.mode == mode) {
            for v in inj.participants() {
                out[v as usize] = true;
            }
        }
        out
    }
}

pub fn generate_dataset(spec: &GenSpec) -> Result<SyntheticDataset> {
    spec.validate()?;
    let mut edges = base_edges(spec);
    let mut rng = stream(spec.seed, &format!("synthgen/{}/inject", spec.name()));
    let mut node_count = spec.n_nodes;
    let mut injections = Vec::with_capacity(3 * spec.n_patterns);
    for mode in PatternTag::MODES {
        for _ in 0..spec.n_patterns {
            let smurfs = rng.random_range(MIN_SMURFS..=MAX_SMURFS);
            let inj = plan_injection(node_count, mode, smurfs, &mut rng)?;
            node_count += inj.new_nodes;
            edges.extend(inj.edges());
            injections.push(inj);
        }
    }

    let mut labels = vec![false; node_count];
    let mut tags = vec![PatternTag::None; node_count];
    for inj in &injections {
        for v in inj.participants() {
            let v = v as usize;
            if !labels[v] {
                labels[v] = true;
                tags[v] = inj.mode;
            }
        }
    }
    let graph = Graph::from_edges(node_count, edges, true);
    Ok(SyntheticDataset {
        spec: *spec,
        graph,
        labels,
        tags,
        injections,
    })
}

pub const EDGES_FILE: &str = "edges.csv";
pub const LABELS_FILE: &str = "labels.csv";
pub const META_FILE: &str = "dataset.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Metadata {
    name: String,
    spec: GenSpec,
    nodes: usize,
    edges: usize,
    positives: usize,
    label_rate: f64,
    injections: Vec<Injection>,
}

/// Writes `edges.csv`, `labels.csv` and `dataset.json` into `dir`.
pub fn write_dataset(dir: &Path, ds: &SyntheticDataset) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let edges_path = dir.join(EDGES_FILE);
    let file = File::create(&edges_path).map_err(|e| Error::io(&edges_path, e))?;
    write_edge_list(file, &ds.graph).map_err(|e| Error::io(&edges_path, e))?;

    let labels_path = dir.join(LABELS_FILE);
    let write_labels = || -> std::io::Result<()> {
        let mut w = BufWriter::new(File::create(&labels_path)?);
        writeln!(w, "node_id,label,pattern_tag")?;
        for (v, (&l, t)) in ds.labels.iter().zip(&ds.tags).enumerate() {
            writeln!(w, "{v},{},{t}", l as u8)?;
        }
        w.flush()
    };
    write_labels().map_err(|e| Error::io(&labels_path, e))?;

    let meta = Metadata {
        name: ds.spec.name(),
        spec: ds.spec,
        nodes: ds.node_count(),
        edges: ds.graph.edge_count(),
        positives: ds.labels.iter().filter(|&&b| b).count(),
        label_rate: ds.label_rate(),
        injections: ds.injections.clone(),
    };
    let meta_path = dir.join(META_FILE);
    let mut text = serde_json::to_string_pretty(&meta)?;
    text.push('\n');
    fs::write(&meta_path, text).map_err(|e| Error::io(&meta_path, e))
}

/// Reads a dataset written by [`write_dataset`].
pub fn read_dataset(dir: &Path) -> Result<SyntheticDataset> {
    let meta_path = dir.join(META_FILE);
    let text = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let meta: Metadata = serde_json::from_str(&text)?;
    let labels_path = dir.join(LABELS_FILE);
    let (labels, tags) = read_labels(&labels_path, meta.nodes)?;
    let edges_path = dir.join(EDGES_FILE);
    let file = File::open(&edges_path).map_err(|e| Error::io(&edges_path, e))?;
    let graph = Graph::from_edges(meta.nodes, parse_edge_list(file, &edges_path)?, true);
    Ok(SyntheticDataset {
        spec: meta.spec,
        graph,
        labels,
        tags,
        injections: meta.injections,
    })
}

fn read_labels(path: &Path, nodes: usize) -> Result<(Vec<bool>, Vec<PatternTag>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut labels = vec![false; nodes];
    let mut tags = vec![PatternTag::None; nodes];
    for (i, line) in BufReader::new(file).lines().enumerate().skip(1) {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.into(),
            line: i as u64 + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').collect();
        let [id, label, tag] = fields[..] else {
            return Err(parse_err(format!("expected 3 fields, got `{line}`")));
        };
        let v: usize = id.parse().map_err(|_| parse_err(format!("bad node id `{id}`")))?;
        if v >= nodes {
            return Err(parse_err(format!("node {v} beyond node count {nodes}")));
        }
        labels[v] = label.trim() == "1";
        tags[v] = tag.parse().map_err(|e: Error| parse_err(e.to_string()))?;
    }
    Ok((labels, tags))
}
