#![allow(dead_code)]

use polyindex::decompose::Neighborhoods;
use polyindex::indexdb::{build_database, BuildParams, ViewSpec};
use polyindex::{CatalogueMode, ModelDatabase, WeightedGraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Star on four nodes.
pub fn g1() -> WeightedGraph {
    WeightedGraph::unweighted(4, [(0, 1), (0, 2), (0, 3)]).unwrap()
}

/// Triangle with a pendant node.
pub fn g2() -> WeightedGraph {
    WeightedGraph::unweighted(4, [(0, 2), (0, 3), (1, 2), (2, 3)]).unwrap()
}

pub fn wheel(spokes: usize) -> WeightedGraph {
    let rim = (1..=spokes).map(|i| (i, if i == spokes { 1 } else { i + 1 }));
    WeightedGraph::unweighted(spokes + 1, (1..=spokes).map(|i| (0, i)).chain(rim)).unwrap()
}

pub fn cycle(n: usize) -> WeightedGraph {
    WeightedGraph::unweighted(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

/// Random graph with each pair joined with probability `density`, weights in `1..=max_weight`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, density: f64, max_weight: u32) -> WeightedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                edges.push((i, j, rng.random_range(1..=max_weight)));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

/// Random connected graph: a random spanning tree plus `extra` further edges.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, extra: usize, max_weight: u32) -> WeightedGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = std::collections::BTreeSet::new();
    for k in 1..n {
        let parent = order[rng.random_range(0..k)];
        let (a, b) = (order[k].min(parent), order[k].max(parent));
        pairs.insert((a, b));
    }
    let target = (n - 1 + extra).min(n * (n - 1) / 2);
    while pairs.len() < target {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    WeightedGraph::new(n, pairs.into_iter().map(|(a, b)| (a, b, rng.random_range(1..=max_weight)))).unwrap()
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Parameters under which every connected component of a view is exactly one subgraph.
pub fn whole_components() -> BuildParams {
    BuildParams {
        neighborhoods: Neighborhoods { radius: 12, min_nodes: 4, max_nodes: 12 },
        mode: CatalogueMode::Weighted,
        signature_limit: 12,
    }
}

/// The three-layer schematic: four component graphs spread over four CVs of
/// two objects. `graph1` occurs in CV11, CV12 and CV21; `graph2` in CV12 and CV21.
pub fn schematic() -> (ModelDatabase, [WeightedGraph; 4]) {
    let graphs = [wheel(5), wheel(6), cycle(6), wheel(7)];
    let union = |ids: &[usize]| WeightedGraph::disjoint_union(ids.iter().map(|&i| &graphs[i])).unwrap();
    let views = [
        ViewSpec::new("object1", "CV11", union(&[0, 2])),
        ViewSpec::new("object1", "CV12", union(&[0, 1])),
        ViewSpec::new("object2", "CV21", union(&[0, 1, 3])),
        ViewSpec::new("object2", "CV22", union(&[3])),
    ];
    (build_database(&views, whole_components()).unwrap(), graphs)
}
