// SPDX-License-Identifier: Apache-2.0

//! Loading transaction exports and turning edge-level laundering flags into
//! node-level labels.
//!
//! A node's propensity is the share of its transactions (sent and received)
//! that are flagged. A node is positive at cut-off `c` when its propensity
//! strictly exceeds `c`.

mod edgelist;
mod patterns;

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};
use crate::{Error, Result};

pub use edgelist::{parse_edge_list, read_edge_list, write_edge_list};
pub use patterns::{PatternIndex, PatternKind};

/// Which delimited columns hold what. Account columns may be composite
/// (e.g. bank id plus account number); their fields are joined with `:`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMap {
    pub src: Vec<usize>,
    pub dst: Vec<usize>,
    pub label: usize,
    #[serde(default)]
    pub pattern: Option<usize>,
    #[serde(default = "default_true")]
    pub has_header: bool,
}

fn default_true() -> bool {
    true
}

impl ColumnMap {
    /// Layout of the public AML simulator exports:
    /// `Timestamp,From Bank,Account,To Bank,Account,...,Is Laundering`.
    pub fn amlsim() -> Self {
        ColumnMap {
            src: vec![1, 2],
            dst: vec![3, 4],
            label: 10,
            pattern: None,
            has_header: true,
        }
    }

    fn max_column(&self) -> usize {
        self.src
            .iter()
            .chain(&self.dst)
            .copied()
            .chain([self.label])
            .chain(self.pattern)
            .max()
            .unwrap_or(0)
    }
}

/// Bijection between external account strings and dense node ids.
#[derive(Debug, Clone, Default)]
pub struct IdTable {
    ids: HashMap<String, NodeId>,
    names: Vec<String>,
}

impl IdTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as NodeId;
        self.ids.insert(name.to_owned(), id);
        self.names.push(name.to_owned());
        id
    }

    pub fn get(&self, name: &str) -> Option<NodeId> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: NodeId) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn write<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = BufWriter::new(out);
        writeln!(w, "node_id,account")?;
        for (id, name) in self.names.iter().enumerate() {
            writeln!(w, "{id},{name}")?;
        }
        w.flush()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionRecord {
    pub src_account: String,
    pub dst_account: String,
    pub src: NodeId,
    pub dst: NodeId,
    pub is_laundering: bool,
    /// Only set on laundering rows.
    pub pattern: Option<PatternKind>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct Transactions {
    pub records: Vec<TransactionRecord>,
    pub ids: IdTable,
    pub skipped: Vec<RowError>,
}

impl Transactions {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    /// Directed transaction graph; repeated transactions collapse to one edge.
    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.node_count(), self.records.iter().map(|r| (r.src, r.dst)), true)
    }
}

fn parse_flag(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "y" | "t" => Some(true),
        "0" | "false" | "no" | "n" | "f" | "" => Some(false),
        _ => None,
    }
}

/// Reads a delimited transaction file. Rows that are short or carry an
/// unreadable flag are skipped and reported with their line number.
pub fn load_transactions(
    path: impl AsRef<Path>,
    columns: &ColumnMap,
    delimiter: u8,
    patterns: Option<&PatternIndex>,
) -> Result<Transactions> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    load_transactions_from(file, path, columns, delimiter, patterns)
}

pub fn load_transactions_from<R: std::io::Read>(
    input: R,
    path: &Path,
    columns: &ColumnMap,
    delimiter: u8,
    patterns: Option<&PatternIndex>,
) -> Result<Transactions> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(columns.has_header)
        .flexible(true)
        .from_reader(input);
    let needed = columns.max_column();
    if columns.has_header {
        let header = reader.headers()?;
        if header.len() <= needed {
            return Err(Error::MissingColumn {
                path: path.into(),
                line: 1,
                column: needed,
            });
        }
    }

    let mut out = Transactions::default();
    let mut record = csv::StringRecord::new();
    let mut key = String::new();
    loop {
        let line = reader.position().line();
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                out.skipped.push(RowError {
                    line,
                    message: e.to_string(),
                });
                continue;
            }
        }
        if record.len() <= needed {
            out.skipped.push(RowError {
                line,
                message: format!("row has {} fields, column {needed} is mapped", record.len()),
            });
            continue;
        }
        let account =
            |cols: &[usize]| -> String { cols.iter().map(|&c| record[c].trim()).collect::<Vec<_>>().join(":") };
        let Some(is_laundering) = parse_flag(&record[columns.label]) else {
            out.skipped.push(RowError {
                line,
                message: format!("unreadable laundering flag `{}`", &record[columns.label]),
            });
            continue;
        };
        let mut pattern = match columns.pattern.map(|c| record[c].trim()) {
            Some("") | None => None,
            Some(name) => match name.parse::<PatternKind>() {
                Ok(p) => Some(p),
                Err(_) => {
                    out.skipped.push(RowError {
                        line,
                        message: format!("unknown pattern `{name}`"),
                    });
                    continue;
                }
            },
        };
        if pattern.is_none() && is_laundering {
            if let Some(index) = patterns {
                key.clear();
                for (i, f) in record.iter().enumerate() {
                    if i > 0 {
                        key.push(delimiter as char);
                    }
                    key.push_str(f.trim());
                }
                pattern = index.lookup(&key);
            }
        }
        if !is_laundering {
            pattern = None;
        }
        let src_account = account(&columns.src);
        let dst_account = account(&columns.dst);
        let src = out.ids.intern(&src_account);
        let dst = out.ids.intern(&dst_account);
        out.records.push(TransactionRecord {
            src_account,
            dst_account,
            src,
            dst,
            is_laundering,
            pattern,
        });
    }
    Ok(out)
}

/// Binary labels for one propensity vector at every cut-off.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffLabels {
    pub propensity: Vec<f64>,
    /// `binary[k][v]` is node `v`'s label at `cutoffs[k]`.
    pub binary: Vec<Vec<bool>>,
}

impl CutoffLabels {
    fn from_counts(flagged: &[u32], total: &[u32], cutoffs: &[f64]) -> Self {
        let propensity: Vec<f64> = flagged
            .iter()
            .zip(total)
            .map(|(&f, &t)| if t == 0 { 0.0 } else { f as f64 / t as f64 })
            .collect();
        let binary = cutoffs
            .iter()
            .map(|&c| propensity.iter().map(|&p| p > c).collect())
            .collect();
        CutoffLabels { propensity, binary }
    }

    pub fn positive_rate(&self, cutoff_index: usize) -> f64 {
        let labels = &self.binary[cutoff_index];
        if labels.is_empty() {
            return 0.0;
        }
        labels.iter().filter(|&&b| b).count() as f64 / labels.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeLabelSet {
    pub cutoffs: Vec<f64>,
    pub overall: CutoffLabels,
    /// Present only when some laundering row carries a pattern.
    pub per_pattern: BTreeMap<PatternKind, CutoffLabels>,
}

impl NodeLabelSet {
    pub fn propensity(&self) -> &[f64] {
        &self.overall.propensity
    }

    pub fn positive_rate(&self, cutoff_index: usize) -> f64 {
        self.overall.positive_rate(cutoff_index)
    }
}

/// Default cut-offs used for the public benchmark labels.
pub const DEFAULT_CUTOFFS: [f64; 5] = [0.1, 0.2, 0.3, 0.5, 0.9];

/// Aggregates transaction flags into node labels. A transaction counts once
/// for each distinct endpoint.
pub fn aggregate_labels(records: &[TransactionRecord], node_count: usize, cutoffs: &[f64]) -> Result<NodeLabelSet> {
    if let Some(&bad) = cutoffs.iter().find(|&&c| !(c > 0.0 && c <= 1.0)) {
        return Err(Error::InvalidArgument(format!("cut-off {bad} outside (0, 1]")));
    }
    let node_count = records
        .iter()
        .map(|r| r.src.max(r.dst) as usize + 1)
        .max()
        .unwrap_or(0)
        .max(node_count);

    let with_patterns = records.iter().any(|r| r.pattern.is_some());
    let mut total = vec![0u32; node_count];
    let mut flagged = vec![0u32; node_count];
    let mut by_pattern: BTreeMap<PatternKind, Vec<u32>> = BTreeMap::new();
    for r in records {
        let ends: &[NodeId] = if r.src == r.dst {
            &[r.src][..]
        } else {
            &[r.src, r.dst][..]
        };
        for &v in ends {
            total[v as usize] += 1;
            if r.is_laundering {
                flagged[v as usize] += 1;
                if with_patterns {
                    let kind = r.pattern.unwrap_or(PatternKind::NotClassified);
                    by_pattern.entry(kind).or_insert_with(|| vec![0; node_count])[v as usize] += 1;
                }
            }
        }
    }

    let per_pattern = by_pattern
        .into_iter()
        .map(|(k, counts)| (k, CutoffLabels::from_counts(&counts, &total, cutoffs)))
        .collect();
    Ok(NodeLabelSet {
        cutoffs: cutoffs.to_vec(),
        overall: CutoffLabels::from_counts(&flagged, &total, cutoffs),
        per_pattern,
    })
}

fn cutoff_column(prefix: &str, c: f64) -> String {
    format!("{prefix}_{c}")
}

/// `node_id,propensity,label_<c>...` with labels written as 0/1.
pub fn write_labels<W: Write>(out: W, labels: &NodeLabelSet) -> std::io::Result<()> {
    let mut w = BufWriter::new(out);
    let mut header = vec!["node_id".to_owned(), "propensity".to_owned()];
    header.extend(labels.cutoffs.iter().map(|&c| cutoff_column("label", c)));
    writeln!(w, "{}", header.join(","))?;
    for (v, p) in labels.overall.propensity.iter().enumerate() {
        write!(w, "{v},{p}")?;
        for column in &labels.overall.binary {
            write!(w, ",{}", column[v] as u8)?;
        }
        writeln!(w)?;
    }
    w.flush()
}

/// `node_id` followed by one 0/1 column per (pattern, cut-off), named `<pattern>_<c>`.
pub fn write_pattern_labels<W: Write>(out: W, labels: &NodeLabelSet) -> std::io::Result<()> {
    let mut w = BufWriter::new(out);
    let mut header = vec!["node_id".to_owned()];
    for kind in labels.per_pattern.keys() {
        header.extend(labels.cutoffs.iter().map(|&c| cutoff_column(kind.as_str(), c)));
    }
    writeln!(w, "{}", header.join(","))?;
    for v in 0..labels.overall.propensity.len() {
        write!(w, "{v}")?;
        for pattern in labels.per_pattern.values() {
            for column in &pattern.binary {
                write!(w, ",{}", column[v] as u8)?;
            }
        }
        writeln!(w)?;
    }
    w.flush()
}
