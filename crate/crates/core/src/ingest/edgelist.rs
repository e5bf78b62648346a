// SPDX-License-Identifier: Apache-2.0

//! Integer edge lists: one `src,dst` pair per line, an optional header,
//! and `#` comment lines.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::graph::{Graph, NodeId};
use crate::{Error, Result};

/// Parses an edge list. Unparsable lines are hard errors that carry the line number.
pub fn parse_edge_list<R: Read>(input: R, path: &Path) -> Result<Vec<(NodeId, NodeId)>> {
    let reader = BufReader::new(input);
    let mut edges = Vec::new();
    let mut seen_data = false;
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line_no = i as u64 + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split([',', '\t', ' ', ';']).filter(|f| !f.is_empty());
        let (a, b) = match (fields.next(), fields.next()) {
            (Some(a), Some(b)) => (a.trim(), b.trim()),
            _ => {
                return Err(Error::Parse {
                    path: path.into(),
                    line: line_no,
                    message: format!("expected two fields, got `{trimmed}`"),
                })
            }
        };
        match (a.parse::<NodeId>(), b.parse::<NodeId>()) {
            (Ok(u), Ok(v)) => {
                edges.push((u, v));
                seen_data = true;
            }
            // a non-numeric first row is a header
            _ if !seen_data && a.parse::<i64>().is_err() && b.parse::<i64>().is_err() => {
                seen_data = true;
            }
            _ => {
                return Err(Error::Parse {
                    path: path.into(),
                    line: line_no,
                    message: format!("node ids must be non-negative integers, got `{trimmed}`"),
                })
            }
        }
    }
    Ok(edges)
}

pub fn read_edge_list(path: impl AsRef<Path>, directed: bool) -> Result<Graph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let edges = parse_edge_list(file, path)?;
    Ok(Graph::from_edges(0, edges, directed))
}

pub fn write_edge_list<W: Write>(out: W, g: &Graph) -> std::io::Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "src,dst")?;
    for (u, v) in g.edges() {
        writeln!(w, "{u},{v}")?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_comments_are_skipped() {
        let text = "# comment\nsrc,dst\n0,1\n\n1,2\n";
        let edges = parse_edge_list(text.as_bytes(), Path::new("t")).unwrap();
        assert_eq!(edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn bad_row_reports_line() {
        let text = "src,dst\n0,1\n2,x\n";
        match parse_edge_list(text.as_bytes(), Path::new("t")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_id_is_rejected() {
        assert!(parse_edge_list("0,1\n-1,2\n".as_bytes(), Path::new("t")).is_err());
    }

    #[test]
    fn empty_input_gives_no_edges() {
        assert!(parse_edge_list("".as_bytes(), Path::new("t")).unwrap().is_empty());
    }
}
