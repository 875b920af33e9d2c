use std::fmt;
use std::str::FromStr;

use super::{BuildParams, DatabaseError, ModelDatabase};
use crate::decompose::Neighborhoods;
use crate::graph::WeightedGraph;
use crate::immanant::GraphSignature;

/// How a matched subgraph votes for a CV that produced its signature more
/// than once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VoteMode {
    /// One vote per (query subgraph, CV).
    #[default]
    PerView,
    /// One vote per stored occurrence of the signature in the CV.
    PerOccurrence,
}

impl fmt::Display for VoteMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VoteMode::PerView => "per-view",
            VoteMode::PerOccurrence => "per-occurrence",
        })
    }
}

impl FromStr for VoteMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "per-view" => Ok(VoteMode::PerView),
            "per-occurrence" => Ok(VoteMode::PerOccurrence),
            other => Err(format!("unknown vote mode '{other}' (expected per-view or per-occurrence)")),
        }
    }
}

/// One vote: which scene graph and subgraph cast it, through which
/// signature, for which CV, and with what weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vote {
    pub graph: usize,
    pub seed: usize,
    pub signature: GraphSignature,
    pub view: usize,
    pub weight: u64,
}

/// Vote counts per CV, overall and per scene graph, with provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteTally {
    view_ids: Vec<String>,
    totals: Vec<u64>,
    per_graph: Vec<Vec<u64>>,
    subgraphs: Vec<usize>,
    hits: Vec<usize>,
    votes: Vec<Vote>,
}

fn rank<'a>(ids: &'a [String], scores: &[u64]) -> Vec<(&'a str, u64)> {
    let mut out: Vec<(&str, u64)> = ids.iter().map(String::as_str).zip(scores.iter().copied()).collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    out
}

impl VoteTally {
    pub fn view_ids(&self) -> &[String] {
        &self.view_ids
    }

    pub fn scores(&self) -> &[u64] {
        &self.totals
    }

    pub fn score(&self, view: &str) -> Option<u64> {
        self.view_ids.iter().position(|v| v == view).map(|i| self.totals[i])
    }

    pub fn graph_count(&self) -> usize {
        self.per_graph.len()
    }

    pub fn graph_scores(&self, graph: usize) -> &[u64] {
        &self.per_graph[graph]
    }

    /// Subgraphs the decomposition produced for scene graph `graph`.
    pub fn subgraph_count(&self, graph: usize) -> usize {
        self.subgraphs[graph]
    }

    /// Subgraphs of scene graph `graph` whose signature is in the database.
    pub fn hit_count(&self, graph: usize) -> usize {
        self.hits[graph]
    }

    /// All CVs, highest score first; equal scores in id order.
    pub fn ranked(&self) -> Vec<(&str, u64)> {
        rank(&self.view_ids, &self.totals)
    }

    pub fn ranked_for_graph(&self, graph: usize) -> Vec<(&str, u64)> {
        rank(&self.view_ids, &self.per_graph[graph])
    }

    /// Every CV sharing the top score; empty when nothing scored.
    pub fn leaders(&self) -> Vec<&str> {
        let best = self.totals.iter().copied().max().unwrap_or(0);
        if best == 0 {
            return Vec::new();
        }
        self.ranked().into_iter().take_while(|&(_, s)| s == best).map(|(id, _)| id).collect()
    }

    /// Highest score among all CVs other than `view`.
    pub fn best_other(&self, view: &str) -> u64 {
        self.view_ids.iter().zip(&self.totals).filter(|(id, _)| *id != view).map(|(_, &s)| s).max().unwrap_or(0)
    }

    pub fn total_votes(&self) -> u64 {
        self.totals.iter().sum()
    }

    pub fn provenance(&self) -> &[Vote] {
        &self.votes
    }
}

impl ModelDatabase {
    /// Recognizes a scene with the build parameters and per-view voting.
    pub fn recognize(&self, scene: &[WeightedGraph]) -> VoteTally {
        self.recognize_with(scene, self.params.neighborhoods, VoteMode::default())
    }

    pub fn recognize_with(&self, scene: &[WeightedGraph], neighborhoods: Neighborhoods, mode: VoteMode) -> VoteTally {
        let params = BuildParams { neighborhoods, ..self.params };
        let n_views = self.views.len();
        let mut tally = VoteTally {
            view_ids: self.views.iter().map(|v| v.id.clone()).collect(),
            totals: vec![0; n_views],
            per_graph: Vec::with_capacity(scene.len()),
            subgraphs: Vec::with_capacity(scene.len()),
            hits: Vec::with_capacity(scene.len()),
            votes: Vec::new(),
        };
        for (gi, g) in scene.iter().enumerate() {
            let mut scores = vec![0u64; n_views];
            let subs = params.subgraph_signatures(g);
            let mut hits = 0;
            for (seed, sig, _) in &subs {
                let Some(entry) = self.lookup(sig) else { continue };
                hits += 1;
                for &(cv, occurrences) in &entry.views {
                    let weight = match mode {
                        VoteMode::PerView => 1,
                        VoteMode::PerOccurrence => u64::from(occurrences),
                    };
                    scores[cv] += weight;
                    tally.votes.push(Vote { graph: gi, seed: *seed, signature: sig.clone(), view: cv, weight });
                }
            }
            for (t, s) in tally.totals.iter_mut().zip(&scores) {
                *t += s;
            }
            tally.per_graph.push(scores);
            tally.subgraphs.push(subs.len());
            tally.hits.push(hits);
        }
        tally
    }

    /// Checks a CV id against the database.
    pub fn require_view(&self, id: &str) -> Result<usize, DatabaseError> {
        self.view_index(id).ok_or_else(|| DatabaseError::BadId(id.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexdb::tests::{cycle, wheel, whole};
    use crate::indexdb::{build_database, ViewSpec};

    #[test]
    fn exact_copy_gets_every_subgraph() {
        let view = wheel(7).permute(&[7, 6, 5, 4, 3, 2, 1, 0]).unwrap();
        let other = cycle(8);
        let db = build_database(&[ViewSpec::new("a", "w", wheel(7)), ViewSpec::new("b", "c", other)], BuildParams::default()).unwrap();
        let tally = db.recognize(&[view]);
        let w = db.view_index("w").unwrap();
        assert_eq!(tally.score("w"), Some(db.views()[w].subgraphs.len() as u64));
        assert_eq!(tally.leaders(), vec!["w"]);
    }

    #[test]
    fn empty_scene_gives_empty_tally() {
        let db = build_database(&[ViewSpec::new("a", "w", wheel(6))], BuildParams::default()).unwrap();
        let tally = db.recognize(&[]);
        assert_eq!(tally.total_votes(), 0);
        assert!(tally.leaders().is_empty());
        assert_eq!(tally.graph_count(), 0);
    }

    #[test]
    fn ties_are_all_reported() {
        let db = build_database(
            &[ViewSpec::new("a", "x", wheel(6)), ViewSpec::new("b", "y", wheel(6))],
            BuildParams::default(),
        )
        .unwrap();
        let tally = db.recognize(&[wheel(6)]);
        assert_eq!(tally.leaders(), vec!["x", "y"]);
        assert_eq!(tally.ranked(), vec![("x", 1), ("y", 1)]);
    }

    #[test]
    fn per_occurrence_counts_repeats() {
        // Two disjoint copies of the same wheel inside one view.
        let twice = WeightedGraph::disjoint_union([&wheel(5), &wheel(5)]).unwrap();
        let db = build_database(&[ViewSpec::new("a", "x", twice)], whole(6, 6)).unwrap();
        let per_view = db.recognize_with(&[wheel(5)], db.params().neighborhoods, VoteMode::PerView);
        let per_occ = db.recognize_with(&[wheel(5)], db.params().neighborhoods, VoteMode::PerOccurrence);
        assert_eq!(per_view.score("x"), Some(1));
        assert_eq!(per_occ.score("x"), Some(2));
    }

    #[test]
    fn vote_mode_text() {
        for m in [VoteMode::PerView, VoteMode::PerOccurrence] {
            assert_eq!(m.to_string().parse::<VoteMode>(), Ok(m));
        }
        assert!("both".parse::<VoteMode>().is_err());
    }
}
