//! Three-layer model database: hashed subgraph signatures, characteristic
//! views, and objects.
//!
//! Each characteristic view (CV) is decomposed into neighborhood subgraphs.
//! Every subgraph's d2 signature is stored once per size table; the entry
//! keeps a representative graph and the CVs that contain the signature.
//! Recognition decomposes the scene the same way and lets each matched
//! subgraph vote for the CVs of its entry.

mod io;
mod table;
mod vote;

use std::collections::{BTreeMap, BTreeSet};

use log::{info, warn};
use thiserror::Error;

use crate::config::{CatalogueMode, RunConfig};
use crate::decompose::{is_relevant, p_neighborhood_subgraphs, Neighborhoods};
use crate::graph::WeightedGraph;
use crate::immanant::{d2_signature, GraphSignature};
use crate::iso::are_isomorphic;

pub use io::{load_database, save_database, FORMAT_VERSION};
pub use table::{signature_hash, SignatureTable};
pub use vote::{Vote, VoteMode, VoteTally};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatabaseError {
    #[error("view '{0}' is not relevant (needs |E| >= |V|)")]
    IrrelevantView(String),
    #[error("duplicate view id '{0}'")]
    DuplicateView(String),
    #[error("invalid id '{0}'")]
    BadId(String),
    #[error("unsupported database version '{0}'")]
    Version(String),
    #[error("corrupt database at line {line}: {message}")]
    Corrupt { line: usize, message: String },
    #[error("label '{0}' cannot be stored")]
    Unserializable(String),
}

/// One hash-layer entry: a signature, the first graph stored under it, and
/// every CV whose decomposition produced the signature, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredGraph {
    pub signature: GraphSignature,
    pub graph: WeightedGraph,
    /// `(cv index, occurrences)`, sorted by cv index.
    pub views: Vec<(usize, u32)>,
}

impl StoredGraph {
    pub fn contains_view(&self, cv: usize) -> bool {
        self.views.binary_search_by_key(&cv, |&(v, _)| v).is_ok()
    }
}

/// Reference to a hash-layer entry: table size and position in that table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntryRef {
    pub size: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicView {
    pub id: String,
    pub object: usize,
    pub graph: WeightedGraph,
    /// One reference per subgraph of the decomposition, in seed order.
    pub subgraphs: Vec<EntryRef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectRecord {
    pub id: String,
    /// CV indices, ascending.
    pub views: Vec<usize>,
}

/// Two non-isomorphic subgraphs that share a signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Accident {
    pub signature: GraphSignature,
    /// CV holding the graph already stored under the signature.
    pub stored_view: String,
    /// CV whose subgraph collided with it.
    pub colliding_view: String,
}

/// Input to [`build_database`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewSpec {
    pub object: String,
    pub view: String,
    pub graph: WeightedGraph,
}

impl ViewSpec {
    pub fn new(object: impl Into<String>, view: impl Into<String>, graph: WeightedGraph) -> Self {
        Self { object: object.into(), view: view.into(), graph }
    }
}

/// Parameters fixed at build time and reused for every query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildParams {
    pub neighborhoods: Neighborhoods,
    pub mode: CatalogueMode,
    pub signature_limit: usize,
}

impl Default for BuildParams {
    fn default() -> Self {
        Self::from(&RunConfig::default())
    }
}

impl From<&RunConfig> for BuildParams {
    fn from(c: &RunConfig) -> Self {
        Self { neighborhoods: c.neighborhoods(), mode: c.mode, signature_limit: c.signature_limit }
    }
}

impl BuildParams {
    /// The graph as the database sees it in this mode.
    pub fn prepare(&self, g: &WeightedGraph) -> WeightedGraph {
        match self.mode {
            CatalogueMode::Weighted => g.clone(),
            CatalogueMode::Binary => g.to_binary(),
        }
    }

    /// Signatures of the in-window neighborhood subgraphs of `g`, in seed
    /// order, with each subgraph and its seed. Subgraphs above the
    /// signature limit are skipped with a warning.
    pub fn subgraph_signatures(&self, g: &WeightedGraph) -> Vec<(usize, GraphSignature, WeightedGraph)> {
        let g = self.prepare(g);
        p_neighborhood_subgraphs(&g, self.neighborhoods)
            .members
            .into_iter()
            .filter_map(|sv| match d2_signature(&sv.graph.laplacian(), self.signature_limit) {
                Ok(sig) => Some((sv.seed, sig, sv.graph)),
                Err(e) => {
                    warn!("skipping subgraph seeded at node {}: {e}", sv.seed);
                    None
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDatabase {
    params: BuildParams,
    tables: BTreeMap<usize, SignatureTable>,
    views: Vec<CharacteristicView>,
    objects: Vec<ObjectRecord>,
    accidents: Vec<Accident>,
}

/// Build statistics; `sharing_ratio` is subgraph occurrences per entry.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildReport {
    pub objects: usize,
    pub views: usize,
    pub entries: usize,
    pub entries_per_size: Vec<(usize, usize)>,
    pub subgraphs: usize,
    pub sharing_ratio: f64,
    pub accidents: usize,
}

pub(crate) fn valid_token(id: &str) -> bool {
    !id.is_empty() && !id.contains(char::is_whitespace) && !id.contains('#')
}

/// Builds the database. Views are processed in id order, so the result does
/// not depend on input order.
pub fn build_database(views: &[ViewSpec], params: BuildParams) -> Result<ModelDatabase, DatabaseError> {
    let mut sorted: Vec<&ViewSpec> = views.iter().collect();
    sorted.sort_by(|a, b| a.view.cmp(&b.view));
    for pair in sorted.windows(2) {
        if pair[0].view == pair[1].view {
            return Err(DatabaseError::DuplicateView(pair[0].view.clone()));
        }
    }
    for v in &sorted {
        for id in [&v.view, &v.object] {
            if !valid_token(id) {
                return Err(DatabaseError::BadId(id.clone()));
            }
        }
        if !is_relevant(&v.graph) {
            return Err(DatabaseError::IrrelevantView(v.view.clone()));
        }
    }
    let object_ids: BTreeSet<&str> = sorted.iter().map(|v| v.object.as_str()).collect();
    let mut objects: Vec<ObjectRecord> = object_ids.iter().map(|id| ObjectRecord { id: id.to_string(), views: Vec::new() }).collect();

    // First pass: collect every occurrence per signature in view order.
    let mut occurrences: BTreeMap<GraphSignature, Vec<(usize, WeightedGraph)>> = BTreeMap::new();
    let mut per_view: Vec<Vec<GraphSignature>> = Vec::with_capacity(sorted.len());
    for (cv, spec) in sorted.iter().enumerate() {
        let subs = params.subgraph_signatures(&spec.graph);
        if subs.is_empty() {
            warn!("view '{}' yields no subgraph inside the size window", spec.view);
        }
        per_view.push(subs.iter().map(|(_, s, _)| s.clone()).collect());
        for (_, sig, g) in subs {
            occurrences.entry(sig).or_default().push((cv, g));
        }
    }

    let mut accidents = Vec::new();
    let mut grouped: BTreeMap<usize, Vec<StoredGraph>> = BTreeMap::new();
    for (signature, occ) in occurrences {
        let (first_cv, representative) = occ[0].clone();
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        let mut flagged: BTreeSet<usize> = BTreeSet::new();
        for (cv, g) in &occ {
            *counts.entry(*cv).or_default() += 1;
            if !flagged.contains(cv) && !are_isomorphic(g, &representative) {
                flagged.insert(*cv);
                let accident = Accident {
                    signature: signature.clone(),
                    stored_view: sorted[first_cv].view.clone(),
                    colliding_view: sorted[*cv].view.clone(),
                };
                warn!("algebraic accident: {} and {} share signature {}", accident.stored_view, accident.colliding_view, signature);
                accidents.push(accident);
            }
        }
        grouped.entry(signature.size()).or_default().push(StoredGraph {
            signature,
            graph: representative,
            views: counts.into_iter().collect(),
        });
    }
    let tables: BTreeMap<usize, SignatureTable> =
        grouped.into_iter().map(|(size, entries)| (size, SignatureTable::from_sorted(entries))).collect();

    let mut cvs = Vec::with_capacity(sorted.len());
    for (cv, (spec, sigs)) in sorted.iter().zip(per_view).enumerate() {
        let object = objects.binary_search_by(|o| o.id.as_str().cmp(&spec.object)).expect("object collected above");
        objects[object].views.push(cv);
        let subgraphs = sigs
            .iter()
            .map(|s| EntryRef { size: s.size(), index: tables[&s.size()].position(s).expect("signature stored above") })
            .collect();
        cvs.push(CharacteristicView { id: spec.view.clone(), object, graph: spec.graph.clone(), subgraphs });
    }
    accidents.sort();
    let db = ModelDatabase { params, tables, views: cvs, objects, accidents };
    let report = db.report();
    info!(
        "built database: {} objects, {} views, {} entries from {} subgraphs",
        report.objects, report.views, report.entries, report.subgraphs
    );
    Ok(db)
}

impl ModelDatabase {
    pub fn params(&self) -> &BuildParams {
        &self.params
    }

    pub fn views(&self) -> &[CharacteristicView] {
        &self.views
    }

    pub fn objects(&self) -> &[ObjectRecord] {
        &self.objects
    }

    pub fn accidents(&self) -> &[Accident] {
        &self.accidents
    }

    pub fn tables(&self) -> &BTreeMap<usize, SignatureTable> {
        &self.tables
    }

    pub fn entry_count(&self) -> usize {
        self.tables.values().map(SignatureTable::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.views.is_empty()
    }

    pub fn view_index(&self, id: &str) -> Option<usize> {
        self.views.iter().position(|v| v.id == id)
    }

    pub fn entry(&self, r: EntryRef) -> Option<&StoredGraph> {
        self.tables.get(&r.size).and_then(|t| t.entries().get(r.index))
    }

    /// Exact-match lookup; absence is a normal result.
    pub fn lookup(&self, sig: &GraphSignature) -> Option<&StoredGraph> {
        self.tables.get(&sig.size()).and_then(|t| t.get(sig))
    }

    /// The object a CV belongs to.
    pub fn object_of(&self, cv: usize) -> &ObjectRecord {
        &self.objects[self.views[cv].object]
    }

    pub fn report(&self) -> BuildReport {
        let subgraphs: usize = self.views.iter().map(|v| v.subgraphs.len()).sum();
        let entries = self.entry_count();
        BuildReport {
            objects: self.objects.len(),
            views: self.views.len(),
            entries,
            entries_per_size: self.tables.iter().map(|(&n, t)| (n, t.len())).collect(),
            subgraphs,
            sharing_ratio: if entries == 0 { 0.0 } else { subgraphs as f64 / entries as f64 },
            accidents: self.accidents.len(),
        }
    }

    /// Checks the links between the three layers.
    pub(crate) fn check_integrity(&self) -> Result<(), String> {
        for (&size, table) in &self.tables {
            for (i, e) in table.entries().iter().enumerate() {
                if e.signature.size() != size || e.graph.node_count() != size {
                    return Err(format!("entry {size}:{i} is filed under the wrong size"));
                }
                if e.views.is_empty() {
                    return Err(format!("entry {size}:{i} lists no view"));
                }
                if e.views.windows(2).any(|w| w[0].0 >= w[1].0) || e.views.iter().any(|&(cv, c)| cv >= self.views.len() || c == 0) {
                    return Err(format!("entry {size}:{i} has a bad view list"));
                }
            }
        }
        for (cv, v) in self.views.iter().enumerate() {
            if v.object >= self.objects.len() || self.objects[v.object].views.binary_search(&cv).is_err() {
                return Err(format!("view '{}' is not linked to its object", v.id));
            }
            if !is_relevant(&v.graph) {
                return Err(format!("view '{}' is not relevant", v.id));
            }
            let mut counts: BTreeMap<EntryRef, u32> = BTreeMap::new();
            for &r in &v.subgraphs {
                *counts.entry(r).or_default() += 1;
            }
            for (r, c) in counts {
                let listed = self.entry(r).and_then(|e| e.views.iter().find(|&&(x, _)| x == cv)).map(|&(_, n)| n);
                if listed != Some(c) {
                    return Err(format!("view '{}' and entry {}:{} disagree", v.id, r.size, r.index));
                }
            }
        }
        let linked: usize = self.objects.iter().map(|o| o.views.len()).sum();
        if linked != self.views.len() {
            return Err("objects do not partition the views".into());
        }
        let total: u32 = self.tables.values().flat_map(|t| t.entries()).flat_map(|e| e.views.iter().map(|&(_, c)| c)).sum();
        if total as usize != self.views.iter().map(|v| v.subgraphs.len()).sum::<usize>() {
            return Err("entry occurrence counts do not match the views".into());
        }
        Ok(())
    }
}
