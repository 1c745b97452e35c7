//! Plain-text edge lists.
//!
//! ```text
//! # qtree-format=1
//! # family=dendrimer
//! # f=3
//! # g=2
//! 10
//! 0 1
//! 0 2
//! ...
//! ```
//!
//! The first non-comment line is the node count, followed by one `u v` line
//! per edge with `u < v`, sorted lexicographically. Header comments of the form
//! `# key=value` carry the graph label.

use std::io::{BufRead, Write};

use super::{ensure_tree, Label, TreeGraph};
use crate::{Error, Result};

/// Version header written at the top of every file this crate emits.
pub const FORMAT_HEADER: &str = "# qtree-format=1";

pub fn write_edge_list<W: Write>(g: &TreeGraph, mut w: W) -> Result<()> {
    writeln!(w, "{FORMAT_HEADER}")?;
    for (k, v) in g.label().entries() {
        writeln!(w, "# {k}={v}")?;
    }
    writeln!(w, "{}", g.n())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an edge list and validates that it describes a tree.
pub fn read_edge_list<R: BufRead>(r: R) -> Result<TreeGraph> {
    let mut label = Label::default();
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let comment = comment.trim();
            if let Some((k, v)) = comment.split_once('=') {
                if k.trim() == "qtree-format" {
                    if v.trim() != "1" {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("unsupported format version {}", v.trim()),
                        });
                    }
                } else if n.is_none() {
                    label.push(k.trim(), v.trim());
                }
            }
            continue;
        }
        let parse = |tok: &str| {
            tok.parse::<usize>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("{tok:?}: {e}"),
            })
        };
        let mut fields = trimmed.split_whitespace();
        match n {
            None => {
                n = Some(parse(fields.next().unwrap_or_default())?);
                if fields.next().is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "node count line has extra fields".into(),
                    });
                }
            }
            Some(_) => {
                let (Some(u), Some(v), None) = (fields.next(), fields.next(), fields.next())
                else {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "expected `u v`".into(),
                    });
                };
                edges.push((parse(u)?, parse(v)?));
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing node count".into(),
    })?;
    let g = TreeGraph::from_edges(n, &edges, label)?;
    ensure_tree(&g)?;
    Ok(g)
}
