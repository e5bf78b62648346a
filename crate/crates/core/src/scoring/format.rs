// SPDX-License-Identifier: Apache-2.0

//! Comma-separated score files.
//!
//! Undirected columns:
//! `node_id,variant,score,s1,s2,s3,l1,l2,l3,n,m`
//!
//! Directed columns:
//! `node_id,variant,score,d00,d01,d02,d10,d11,d12,d20,d21,d22,z00,z01,z02,z10,z11,z12,z20,z21,z22,l,n,m`
//! where `dij` is the density of the block from level `i` to level `j` and
//! `zij` its number of free entries.
//!
//! Reals are written in shortest round-trip form, so a file read back
//! reproduces the scores bit for bit.

use std::io::{Read, Write};

use crate::{Error, Result};

use super::{Blocks, DirectedBlocks, GargAmlScore, UndirectedBlocks, Variant};

const UNDIRECTED_HEADER: [&str; 11] = [
    "node_id", "variant", "score", "s1", "s2", "s3", "l1", "l2", "l3", "n", "m",
];

fn directed_header() -> Vec<String> {
    let mut h: Vec<String> = ["node_id", "variant", "score"].map(String::from).to_vec();
    for prefix in ["d", "z"] {
        for i in 0..3 {
            for j in 0..3 {
                h.push(format!("{prefix}{i}{j}"));
            }
        }
    }
    h.extend(["l", "n", "m"].map(String::from));
    h
}

/// Writes scores of a single variant. An empty slice still gets a header.
pub fn write_scores<W: Write>(out: W, variant: Variant, scores: &[GargAmlScore]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    match variant {
        Variant::Undirected => w.write_record(UNDIRECTED_HEADER)?,
        Variant::Directed => w.write_record(directed_header())?,
    }
    let mut row: Vec<String> = Vec::with_capacity(24);
    for s in scores {
        row.clear();
        row.push(s.node.to_string());
        row.push(variant.to_string());
        row.push(s.score.to_string());
        match (&s.blocks, variant) {
            (Blocks::Undirected(b), Variant::Undirected) => {
                row.extend([b.s1, b.s2, b.s3].map(|x| x.to_string()));
                row.extend([b.l1, b.l2, b.l3, b.n, b.m].map(|x| x.to_string()));
            }
            (Blocks::Directed(b), Variant::Directed) => {
                row.extend(b.density.iter().flatten().map(|x| x.to_string()));
                row.extend(b.sizes.iter().flatten().map(|x| x.to_string()));
                row.extend([b.l, b.n, b.m].map(|x| x.to_string()));
            }
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "node {} carries a {} score in a {variant} file",
                    s.node,
                    s.variant()
                )))
            }
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<scores>", e))?;
    Ok(())
}

/// Reads a file produced by [`write_scores`].
pub fn read_scores<R: Read>(input: R) -> Result<Vec<GargAmlScore>> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i as u64 + 2;
        let bad = |message: String| Error::Parse {
            path: "<scores>".into(),
            line,
            message,
        };
        let f = |k: usize| -> Result<f64> {
            rec.get(k)
                .ok_or_else(|| bad(format!("missing column {k}")))?
                .parse()
                .map_err(|e| bad(format!("column {k}: {e}")))
        };
        let u = |k: usize| -> Result<u64> {
            rec.get(k)
                .ok_or_else(|| bad(format!("missing column {k}")))?
                .parse()
                .map_err(|e| bad(format!("column {k}: {e}")))
        };
        let node = u(0)? as u32;
        let variant: Variant = rec.get(1).unwrap_or_default().parse()?;
        let score = f(2)?;
        let blocks = match variant {
            Variant::Undirected => Blocks::Undirected(UndirectedBlocks {
                s1: f(3)?,
                s2: f(4)?,
                s3: f(5)?,
                l1: u(6)?,
                l2: u(7)?,
                l3: u(8)?,
                n: u(9)?,
                m: u(10)?,
            }),
            Variant::Directed => {
                let mut density = [[0.0; 3]; 3];
                let mut sizes = [[0u64; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        density[i][j] = f(3 + 3 * i + j)?;
                        sizes[i][j] = u(12 + 3 * i + j)?;
                    }
                }
                Blocks::Directed(DirectedBlocks {
                    density,
                    sizes,
                    l: u(21)?,
                    n: u(22)?,
                    m: u(23)?,
                })
            }
        };
        out.push(GargAmlScore { node, score, blocks });
    }
    Ok(out)
}
