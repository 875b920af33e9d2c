//! Text serialization of a [`ModelDatabase`].
//!
//! ```text
//! polyindex-db 1
//! mode weighted
//! neighborhoods 2 5 10
//! signature-limit 12
//! objects 2
//! object cube
//! ...
//! views 3
//! view cube-v1 cube 7 1-2:4,1-3:9,... a b c d e f g
//! refs 7:0 6:3 ...
//! ...
//! entries 5 7
//! entry 3 18 33 24 6 ...
//! graph 5 1-2:4,...
//! cvs 0:1 2:2
//! ...
//! accidents 0
//! sha256 <hex digest of every preceding byte>
//! ```
//!
//! Graphs are `<n> <edges> [labels]` with 1-based `a-b:w` edges joined by
//! commas (`-` when there are none) and either no labels or one per node.
//! Every section is sorted, so equal databases produce identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::{valid_token, Accident, BuildParams, CharacteristicView, DatabaseError, EntryRef, ModelDatabase, ObjectRecord, SignatureTable, StoredGraph};
use crate::config::CatalogueMode;
use crate::decompose::Neighborhoods;
use crate::graph::WeightedGraph;
use crate::immanant::GraphSignature;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "polyindex-db";

fn encode_graph(g: &WeightedGraph) -> Result<String, DatabaseError> {
    let mut out = g.node_count().to_string();
    out.push(' ');
    if g.edge_count() == 0 {
        out.push('-');
    } else {
        let edges: Vec<String> = g.edges().iter().map(|e| format!("{}-{}:{}", e.a + 1, e.b + 1, e.weight)).collect();
        out.push_str(&edges.join(","));
    }
    for label in g.labels() {
        if !valid_token(label) {
            return Err(DatabaseError::Unserializable(label.clone()));
        }
        out.push(' ');
        out.push_str(label);
    }
    Ok(out)
}

fn coefficients(sig: &GraphSignature) -> String {
    sig.to_string()
}

pub fn save_database(db: &ModelDatabase) -> Result<String, DatabaseError> {
    let mut out = String::new();
    let p = &db.params;
    let _ = writeln!(out, "{MAGIC} {FORMAT_VERSION}");
    let _ = writeln!(out, "mode {}", p.mode);
    let _ = writeln!(out, "neighborhoods {} {} {}", p.neighborhoods.radius, p.neighborhoods.min_nodes, p.neighborhoods.max_nodes);
    let _ = writeln!(out, "signature-limit {}", p.signature_limit);
    let _ = writeln!(out, "objects {}", db.objects.len());
    for o in &db.objects {
        let _ = writeln!(out, "object {}", o.id);
    }
    let _ = writeln!(out, "views {}", db.views.len());
    for v in &db.views {
        let _ = writeln!(out, "view {} {} {}", v.id, db.objects[v.object].id, encode_graph(&v.graph)?);
        let refs: Vec<String> = v.subgraphs.iter().map(|r| format!("{}:{}", r.size, r.index)).collect();
        let _ = writeln!(out, "refs {}", refs.join(" "));
    }
    let sizes: Vec<String> = db.tables.iter().map(|(n, t)| format!("{n}={}", t.len())).collect();
    let _ = writeln!(out, "entries {}", sizes.join(" "));
    for table in db.tables.values() {
        for e in table.entries() {
            let _ = writeln!(out, "entry {}", coefficients(&e.signature));
            let _ = writeln!(out, "graph {}", encode_graph(&e.graph)?);
            let cvs: Vec<String> = e.views.iter().map(|(cv, c)| format!("{cv}:{c}")).collect();
            let _ = writeln!(out, "cvs {}", cvs.join(" "));
        }
    }
    let _ = writeln!(out, "accidents {}", db.accidents.len());
    for a in &db.accidents {
        let _ = writeln!(out, "accident {} {} {}", a.stored_view, a.colliding_view, coefficients(&a.signature));
    }
    let digest = hex::encode(Sha256::digest(out.as_bytes()));
    let _ = writeln!(out, "sha256 {digest}");
    Ok(out)
}

struct Reader<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl<'a> Reader<'a> {
    fn corrupt(&self, message: impl Into<String>) -> DatabaseError {
        DatabaseError::Corrupt { line: self.next, message: message.into() }
    }

    /// Next line, split into its keyword and remaining tokens.
    fn expect(&mut self, keyword: &str) -> Result<Vec<&'a str>, DatabaseError> {
        let Some(line) = self.lines.get(self.next) else {
            self.next += 1;
            return Err(self.corrupt(format!("unexpected end of data, expected '{keyword}'")));
        };
        self.next += 1;
        let mut tokens = line.split(' ');
        if tokens.next() != Some(keyword) {
            return Err(self.corrupt(format!("expected '{keyword}'")));
        }
        Ok(tokens.filter(|t| !t.is_empty()).collect())
    }

    fn number<T: std::str::FromStr>(&self, tok: &str) -> Result<T, DatabaseError> {
        tok.parse().map_err(|_| self.corrupt(format!("bad number '{tok}'")))
    }

    fn count(&mut self, keyword: &str) -> Result<usize, DatabaseError> {
        match self.expect(keyword)?.as_slice() {
            [n] => self.number(n),
            _ => Err(self.corrupt(format!("'{keyword}' takes one count"))),
        }
    }

    fn graph(&self, tokens: &[&str]) -> Result<WeightedGraph, DatabaseError> {
        let [n, edges, labels @ ..] = tokens else {
            return Err(self.corrupt("graph needs a node count and an edge list"));
        };
        let n: usize = self.number(n)?;
        let mut list = Vec::new();
        if *edges != "-" {
            for item in edges.split(',') {
                let parsed = item.split_once(':').and_then(|(ab, w)| {
                    let (a, b) = ab.split_once('-')?;
                    Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?, w.parse::<u32>().ok()?))
                });
                match parsed {
                    Some((a, b, w)) if a >= 1 && b >= 1 => list.push((a - 1, b - 1, w)),
                    _ => return Err(self.corrupt(format!("bad edge '{item}'"))),
                }
            }
        }
        let g = WeightedGraph::new(n, list).map_err(|e| self.corrupt(e.to_string()))?;
        if labels.is_empty() {
            return Ok(g);
        }
        g.with_labels(labels.iter().map(|s| s.to_string()).collect()).map_err(|e| self.corrupt(e.to_string()))
    }

    fn signature(&self, tokens: &[&str]) -> Result<GraphSignature, DatabaseError> {
        tokens.join(" ").parse().map_err(|e: crate::immanant::SignatureError| self.corrupt(e.to_string()))
    }
}

/// Parses a saved database. Any defect (bad version, checksum mismatch,
/// truncation, broken references) rejects the whole input.
pub fn load_database(text: &str) -> Result<ModelDatabase, DatabaseError> {
    let header = text.lines().next().unwrap_or_default();
    match header.split_once(' ') {
        Some((MAGIC, version)) if version == FORMAT_VERSION.to_string() => {}
        Some((MAGIC, version)) => return Err(DatabaseError::Version(version.to_string())),
        _ => return Err(DatabaseError::Corrupt { line: 1, message: format!("missing '{MAGIC}' header") }),
    }
    let body_end = text.trim_end_matches('\n').rfind('\n').map(|i| i + 1).unwrap_or(0);
    let (body, trailer) = text.split_at(body_end);
    let line_count = body.lines().count();
    let digest = trailer.trim_end_matches('\n').strip_prefix("sha256 ");
    let actual = hex::encode(Sha256::digest(body.as_bytes()));
    if digest != Some(actual.as_str()) || !text.ends_with('\n') {
        return Err(DatabaseError::Corrupt { line: line_count + 1, message: "checksum mismatch or missing".into() });
    }

    let mut r = Reader { lines: body.lines().collect(), next: 1 };
    let mode = match r.expect("mode")?.as_slice() {
        [m] => m.parse::<CatalogueMode>().map_err(|e| r.corrupt(e.to_string()))?,
        _ => return Err(r.corrupt("'mode' takes one value")),
    };
    let neighborhoods = match r.expect("neighborhoods")?.as_slice() {
        [a, b, c] => Neighborhoods { radius: r.number(a)?, min_nodes: r.number(b)?, max_nodes: r.number(c)? },
        _ => return Err(r.corrupt("'neighborhoods' takes radius, min and max")),
    };
    let signature_limit = r.count("signature-limit")?;
    let params = BuildParams { neighborhoods, mode, signature_limit };

    let mut objects = Vec::new();
    for _ in 0..r.count("objects")? {
        match r.expect("object")?.as_slice() {
            [id] => objects.push(ObjectRecord { id: id.to_string(), views: Vec::new() }),
            _ => return Err(r.corrupt("'object' takes one id")),
        }
    }
    if objects.windows(2).any(|w| w[0].id >= w[1].id) {
        return Err(r.corrupt("objects are not sorted"));
    }

    let mut views: Vec<CharacteristicView> = Vec::new();
    for cv in 0..r.count("views")? {
        let tokens = r.expect("view")?;
        let [id, object, graph @ ..] = tokens.as_slice() else {
            return Err(r.corrupt("'view' takes an id, an object and a graph"));
        };
        let object = objects.binary_search_by(|o| o.id.as_str().cmp(object)).map_err(|_| r.corrupt(format!("unknown object '{object}'")))?;
        let graph = r.graph(graph)?;
        let mut subgraphs = Vec::new();
        for tok in r.expect("refs")? {
            let (size, index) = tok.split_once(':').ok_or_else(|| r.corrupt(format!("bad reference '{tok}'")))?;
            subgraphs.push(EntryRef { size: r.number(size)?, index: r.number(index)? });
        }
        if views.last().is_some_and(|v| v.id.as_str() >= *id) {
            return Err(r.corrupt("views are not sorted"));
        }
        objects[object].views.push(cv);
        views.push(CharacteristicView { id: id.to_string(), object, graph, subgraphs });
    }

    let mut sizes = Vec::new();
    for tok in r.expect("entries")? {
        let (n, count) = tok.split_once('=').ok_or_else(|| r.corrupt(format!("bad table size '{tok}'")))?;
        sizes.push((r.number::<usize>(n)?, r.number::<usize>(count)?));
    }
    let mut tables = BTreeMap::new();
    for (size, count) in sizes {
        let mut entries: Vec<StoredGraph> = Vec::with_capacity(count.min(1 << 16));
        for _ in 0..count {
            let tokens = r.expect("entry")?;
            let signature = r.signature(&tokens)?;
            let tokens = r.expect("graph")?;
            let graph = r.graph(&tokens)?;
            let mut list = Vec::new();
            for tok in r.expect("cvs")? {
                let (cv, c) = tok.split_once(':').ok_or_else(|| r.corrupt(format!("bad view count '{tok}'")))?;
                list.push((r.number(cv)?, r.number(c)?));
            }
            if signature.size() != size || entries.last().is_some_and(|e| e.signature >= signature) {
                return Err(r.corrupt("entries are misfiled or unsorted"));
            }
            entries.push(StoredGraph { signature, graph, views: list });
        }
        if tables.insert(size, SignatureTable::from_sorted(entries)).is_some() {
            return Err(r.corrupt(format!("table {size} appears twice")));
        }
    }

    let mut accidents = Vec::new();
    for _ in 0..r.count("accidents")? {
        let tokens = r.expect("accident")?;
        let [stored, colliding, coeffs @ ..] = tokens.as_slice() else {
            return Err(r.corrupt("'accident' takes two views and a signature"));
        };
        accidents.push(Accident { signature: r.signature(coeffs)?, stored_view: stored.to_string(), colliding_view: colliding.to_string() });
    }
    if r.next < r.lines.len() {
        r.next += 1;
        return Err(r.corrupt("unexpected trailing data"));
    }

    let db = ModelDatabase { params, tables, views, objects, accidents };
    db.check_integrity().map_err(|message| DatabaseError::Corrupt { line: line_count, message })?;
    Ok(db)
}
