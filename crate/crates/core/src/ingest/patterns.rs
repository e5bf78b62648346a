// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Laundering typologies used by the public simulator labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternKind {
    FanOut,
    FanIn,
    GatherScatter,
    ScatterGather,
    Cycle,
    Random,
    Bipartite,
    Stack,
    NotClassified,
}

impl PatternKind {
    pub const ALL: [PatternKind; 9] = [
        PatternKind::FanOut,
        PatternKind::FanIn,
        PatternKind::GatherScatter,
        PatternKind::ScatterGather,
        PatternKind::Cycle,
        PatternKind::Random,
        PatternKind::Bipartite,
        PatternKind::Stack,
        PatternKind::NotClassified,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PatternKind::FanOut => "fan-out",
            PatternKind::FanIn => "fan-in",
            PatternKind::GatherScatter => "gather-scatter",
            PatternKind::ScatterGather => "scatter-gather",
            PatternKind::Cycle => "cycle",
            PatternKind::Random => "random",
            PatternKind::Bipartite => "bipartite",
            PatternKind::Stack => "stack",
            PatternKind::NotClassified => "not-classified",
        }
    }
}

impl FromStr for PatternKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .chars()
            .map(|c| match c {
                '_' | ' ' => '-',
                c => c.to_ascii_lowercase(),
            })
            .collect();
        let norm = norm.strip_prefix("simple-").unwrap_or(&norm);
        PatternKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown pattern `{s}`")))
    }
}

/// Transaction rows listed under each `BEGIN LAUNDERING ATTEMPT - <TYPE>`
/// block of a simulator patterns file, keyed by their trimmed fields.
#[derive(Debug, Clone, Default)]
pub struct PatternIndex {
    rows: HashMap<String, PatternKind>,
    delimiter: u8,
}

impl PatternIndex {
    pub fn read(path: impl AsRef<Path>, delimiter: u8) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(file, path, delimiter)
    }

    pub fn parse<R: Read>(input: R, path: &Path, delimiter: u8) -> Result<Self> {
        let sep = delimiter as char;
        let mut rows = HashMap::new();
        let mut current: Option<PatternKind> = None;
        for (i, line) in BufReader::new(input).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("BEGIN LAUNDERING ATTEMPT - ") {
                let name = rest.split(':').next().unwrap_or(rest);
                current = Some(name.parse().map_err(|_| Error::Parse {
                    path: path.into(),
                    line: i as u64 + 1,
                    message: format!("unknown pattern `{name}`"),
                })?);
            } else if line.starts_with("END LAUNDERING ATTEMPT") {
                current = None;
            } else if let (Some(kind), false) = (current, line.is_empty()) {
                let key = line
                    .split(sep)
                    .map(str::trim)
                    .collect::<Vec<_>>()
                    .join(&sep.to_string());
                rows.insert(key, kind);
            }
        }
        Ok(PatternIndex { rows, delimiter })
    }

    pub fn lookup(&self, key: &str) -> Option<PatternKind> {
        self.rows.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn delimiter(&self) -> u8 {
        self.delimiter
    }
}
