//! Edge-list text format: one edge per line, two whitespace-separated
//! node tokens; `#`-prefixed lines are comments. Node tokens are mapped
//! to dense integer ids in order of first appearance and the mapping is
//! returned so callers can emit it alongside output.
//!
//! Isolated nodes cannot be expressed as edges, so the writer declares
//! them on `# node <token>` comment lines, which this reader understands
//! and other tools skip as comments.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Parses an edge list, returning the graph and the id -> token mapping.
/// Duplicate edges and self-loops are skipped (the graph is simple).
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<(Graph, Vec<String>)> {
    let mut g = Graph::new();
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut intern = |tok: &str, g: &mut Graph, labels: &mut Vec<String>| -> NodeId {
        match ids.get(tok) {
            Some(&id) => id,
            None => {
                let id = labels.len() as NodeId;
                ids.insert(tok.to_string(), id);
                labels.push(tok.to_string());
                g.ensure_node(id);
                id
            }
        }
    };
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            // "# node <token>" declares an isolated node.
            let mut parts = rest.split_whitespace();
            if parts.next() == Some("node") {
                if let Some(tok) = parts.next() {
                    intern(tok, &mut g, &mut labels);
                }
            }
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 2 node tokens, found {}", toks.len()),
            });
        }
        let u = intern(toks[0], &mut g, &mut labels);
        let v = intern(toks[1], &mut g, &mut labels);
        if u == v || g.has_edge(u, v) {
            continue;
        }
        g.add_edge(u, v, 1.0)?;
    }
    Ok((g, labels))
}

pub fn read_edge_list_file<P: AsRef<Path>>(path: P) -> Result<(Graph, Vec<String>)> {
    let file = std::fs::File::open(path)?;
    read_edge_list(std::io::BufReader::new(file))
}

/// Writes the graph as an edge list in sorted order. When `labels` is
/// given, ids below its length are written as their original tokens;
/// other ids are written as bare integers.
pub fn write_edge_list<W: Write>(g: &Graph, mut w: W, labels: Option<&[String]>) -> Result<()> {
    let token = |id: NodeId| -> String {
        match labels.and_then(|l| l.get(id as usize)) {
            Some(tok) => tok.clone(),
            None => id.to_string(),
        }
    };
    for u in g.nodes() {
        if g.degree(u) == 0 {
            writeln!(w, "# node {}", token(u))?;
        }
    }
    for (u, v, _) in g.edges() {
        writeln!(w, "{} {}", token(u), token(v))?;
    }
    Ok(())
}

pub fn write_edge_list_file<P: AsRef<Path>>(
    g: &Graph,
    path: P,
    labels: Option<&[String]>,
) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_edge_list(g, std::io::BufWriter::new(file), labels)
}
