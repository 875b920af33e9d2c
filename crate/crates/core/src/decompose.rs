//! Overlapping p-neighborhood subviews and the average-degree relevance test.

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::graph::WeightedGraph;

/// Radius and node-count window for subview extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighborhoods {
    pub radius: usize,
    pub min_nodes: usize,
    pub max_nodes: usize,
}

impl Default for Neighborhoods {
    fn default() -> Self {
        Self { radius: 2, min_nodes: 5, max_nodes: 10 }
    }
}

/// Induced neighborhood of `seed`, re-indexed; `origin` maps back to the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subview {
    pub seed: usize,
    pub graph: WeightedGraph,
    pub origin: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SubgraphSet<'g> {
    pub parent: &'g WeightedGraph,
    pub members: Vec<Subview>,
}

impl SubgraphSet<'_> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// For each seed in index order, the subgraph induced on nodes within
/// `radius` hops. Subgraphs outside the window are dropped, and a node set
/// already produced by an earlier seed is not repeated. Neighborhoods never
/// cross components, so disconnected parents decompose per component.
pub fn p_neighborhood_subgraphs(g: &WeightedGraph, params: Neighborhoods) -> SubgraphSet<'_> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut members = Vec::new();
    for seed in 0..g.node_count() {
        let nodes: Vec<usize> = g
            .bfs_distances(seed)
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_some_and(|d| d <= params.radius))
            .map(|(v, _)| v)
            .collect();
        if nodes.len() < params.min_nodes || nodes.len() > params.max_nodes {
            continue;
        }
        if !seen.insert(nodes.clone()) {
            continue;
        }
        let sub = g.induced_subgraph(&nodes);
        members.push(Subview { seed, graph: sub.graph, origin: sub.origin });
    }
    SubgraphSet { parent: g, members }
}

/// Average node degree `Σ d_i / n = 2|E| / n`, exact.
pub fn complexity_measure(g: &WeightedGraph) -> Ratio<usize> {
    Ratio::new(2 * g.edge_count(), g.node_count())
}

/// `f(G) >= 2`, i.e. `|E| >= |V|`: the graph has at least one cycle's worth
/// of edges beyond a spanning forest.
pub fn is_relevant(g: &WeightedGraph) -> bool {
    g.edge_count() >= g.node_count()
}
