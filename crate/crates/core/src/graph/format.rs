//! Line-oriented graph text format.
//!
//! ```text
//! # comment
//! graph star 4
//! 1 2 1
//! 1 3 1
//! 1 4 1
//! ```
//!
//! A `graph <name> <n>` header opens a record; each following `<i> <j> <w>`
//! line adds an edge between 1-based nodes `i` and `j`. Edge order is free.

use std::fmt::Write as _;

use thiserror::Error;

use super::{GraphError, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("no graph records found")]
    NoRecords,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphRecord {
    pub name: String,
    pub graph: WeightedGraph,
}

struct Pending {
    name: String,
    node_count: usize,
    header_line: usize,
    edges: Vec<(usize, usize, u32)>,
}

impl Pending {
    fn finish(self) -> Result<GraphRecord, FormatError> {
        let line = self.header_line;
        let graph = WeightedGraph::new(self.node_count, self.edges).map_err(|source| FormatError::Graph { line, source })?;
        Ok(GraphRecord { name: self.name, graph })
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Parses every record in `text`. Fails if there is none.
pub fn parse_graphs(text: &str) -> Result<Vec<GraphRecord>, FormatError> {
    let mut records = Vec::new();
    let mut current: Option<Pending> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or_default();
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["graph", name, n] => {
                let node_count = n.parse().map_err(|_| syntax(line, format!("bad node count '{n}'")))?;
                if let Some(done) = current.take() {
                    records.push(done.finish()?);
                }
                current = Some(Pending { name: name.to_string(), node_count, header_line: line, edges: Vec::new() });
            }
            ["graph", ..] => return Err(syntax(line, "expected 'graph <name> <n>'")),
            [i, j, w] => {
                let pending = current.as_mut().ok_or_else(|| syntax(line, "edge before any 'graph' header"))?;
                let node = |tok: &str| -> Result<usize, FormatError> {
                    match tok.parse::<usize>() {
                        Ok(v) if v >= 1 && v <= pending.node_count => Ok(v - 1),
                        _ => Err(syntax(line, format!("node '{tok}' is not in 1..={}", pending.node_count))),
                    }
                };
                let (a, b) = (node(i)?, node(j)?);
                let weight = w.parse::<u32>().ok().filter(|&w| w >= 1).ok_or_else(|| syntax(line, format!("bad weight '{w}'")))?;
                if a == b {
                    return Err(FormatError::Graph { line, source: GraphError::SelfLoop(a + 1) });
                }
                pending.edges.push((a, b, weight));
            }
            _ => return Err(syntax(line, format!("unrecognized line '{}'", content.trim()))),
        }
    }
    if let Some(done) = current.take() {
        records.push(done.finish()?);
    }
    if records.is_empty() {
        return Err(FormatError::NoRecords);
    }
    Ok(records)
}

pub fn write_graph(name: &str, graph: &WeightedGraph) -> String {
    let mut out = format!("graph {name} {}\n", graph.node_count());
    for e in graph.edges() {
        let _ = writeln!(out, "{} {} {}", e.a + 1, e.b + 1, e.weight);
    }
    out
}

/// True if the first directive in `text` is a `graph` header.
pub fn looks_like_graph_text(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or_default().trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("graph"))
}
