//! Undirected graphs with positive integer edge weights and their Laplacians.
//!
//! Node indices are 0-based in this API. External text formats carry explicit
//! 1-based identifiers and are handled in [`format`].

pub mod format;

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one node")]
    Empty,
    #[error("node {index} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { index: usize, node_count: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge {0}-{1} has weight 0; weights must be >= 1")]
    ZeroWeight(usize, usize),
    #[error("expected {expected} node labels, got {actual}")]
    LabelCount { expected: usize, actual: usize },
    #[error("mapping is not a bijection on {0} nodes")]
    NotBijection(usize),
    #[error("matrix is not a valid Laplacian: {0}")]
    NotLaplacian(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    /// Smaller endpoint.
    pub a: usize,
    /// Larger endpoint.
    pub b: usize,
    pub weight: u32,
}

/// Simple undirected graph with strictly positive integer weights.
///
/// Immutable once built. Edges are stored once with `a < b`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    node_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, u32)>>,
    labels: Vec<String>,
}

impl WeightedGraph {
    pub fn new<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, u32)>,
    {
        if node_count == 0 {
            return Err(GraphError::Empty);
        }
        let mut list = Vec::new();
        for (i, j, w) in edges {
            for index in [i, j] {
                if index >= node_count {
                    return Err(GraphError::NodeOutOfRange { index, node_count });
                }
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            if w == 0 {
                return Err(GraphError::ZeroWeight(i, j));
            }
            list.push(Edge { a: i.min(j), b: i.max(j), weight: w });
        }
        list.sort();
        if let Some(pair) = list.windows(2).find(|p| (p[0].a, p[0].b) == (p[1].a, p[1].b)) {
            return Err(GraphError::DuplicateEdge(pair[0].a, pair[0].b));
        }
        let mut adjacency = vec![Vec::new(); node_count];
        for e in &list {
            adjacency[e.a].push((e.b, e.weight));
            adjacency[e.b].push((e.a, e.weight));
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(Self { node_count, edges: list, adjacency, labels: Vec::new() })
    }

    /// Binary graph: every edge gets weight 1.
    pub fn unweighted<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new(node_count, edges.into_iter().map(|(i, j)| (i, j, 1)))
    }

    /// Attaches opaque per-node tags (junction ids, source node names, ...).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.node_count {
            return Err(GraphError::LabelCount { expected: self.node_count, actual: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `node` with the connecting edge weight, sorted by index.
    pub fn neighbors(&self, node: usize) -> &[(usize, u32)] {
        &self.adjacency[node]
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<u32> {
        self.adjacency[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .ok()
            .map(|pos| self.adjacency[i][pos].1)
    }

    /// Per-node labels; empty when the graph carries none.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, node: usize) -> Option<&str> {
        self.labels.get(node).map(String::as_str)
    }

    pub fn is_binary(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1)
    }

    /// Same topology with every weight replaced by 1.
    pub fn to_binary(&self) -> Self {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight = 1;
        }
        for nbrs in &mut g.adjacency {
            for (_, w) in nbrs.iter_mut() {
                *w = 1;
            }
        }
        g
    }

    pub fn laplacian(&self) -> LaplacianMatrix {
        let n = self.node_count;
        let mut entries = vec![0i64; n * n];
        for e in &self.edges {
            let w = i64::from(e.weight);
            entries[e.a * n + e.b] -= w;
            entries[e.b * n + e.a] -= w;
            entries[e.a * n + e.a] += w;
            entries[e.b * n + e.b] += w;
        }
        LaplacianMatrix { size: n, entries }
    }

    /// Number of incident edges per node, ignoring weights.
    pub fn degree_profile(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Relabels nodes: node `i` becomes `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let n = self.node_count;
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(GraphError::NotBijection(n));
        }
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(GraphError::NotBijection(n));
            }
        }
        let g = Self::new(n, self.edges.iter().map(|e| (perm[e.a], perm[e.b], e.weight)))?;
        if self.labels.is_empty() {
            return Ok(g);
        }
        let mut labels = vec![String::new(); n];
        for (i, label) in self.labels.iter().enumerate() {
            labels[perm[i]] = label.clone();
        }
        g.with_labels(labels)
    }

    /// Subgraph induced by `nodes`, re-indexed in ascending order of the
    /// original index. Duplicates in `nodes` are ignored.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> InducedSubgraph {
        let mut origin = nodes.to_vec();
        origin.sort_unstable();
        origin.dedup();
        let mut local = vec![usize::MAX; self.node_count];
        for (k, &v) in origin.iter().enumerate() {
            local[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| local[e.a] != usize::MAX && local[e.b] != usize::MAX)
            .map(|e| (local[e.a], local[e.b], e.weight));
        let mut graph = Self::new(origin.len(), edges).expect("induced subgraph of a valid graph");
        if !self.labels.is_empty() {
            graph.labels = origin.iter().map(|&v| self.labels[v].clone()).collect();
        }
        InducedSubgraph { graph, origin }
    }

    /// Connected components, ordered by their smallest original node.
    pub fn connected_components(&self) -> Vec<InducedSubgraph> {
        let n = self.node_count;
        let mut component = vec![usize::MAX; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if component[start] != usize::MAX {
                continue;
            }
            let id = groups.len();
            let mut members = vec![start];
            component[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &(u, _) in &self.adjacency[v] {
                    if component[u] == usize::MAX {
                        component[u] = id;
                        members.push(u);
                        queue.push_back(u);
                    }
                }
            }
            groups.push(members);
        }
        groups.iter().map(|members| self.induced_subgraph(members)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or_default();
            for &(u, _) in &self.adjacency[v] {
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Places the graphs side by side; node indices are offset in order.
    pub fn disjoint_union<'a, I>(graphs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = &'a WeightedGraph>,
    {
        let mut edges = Vec::new();
        let mut labels = Vec::new();
        let mut offset = 0;
        let mut all_labelled = true;
        for g in graphs {
            edges.extend(g.edges.iter().map(|e| (e.a + offset, e.b + offset, e.weight)));
            all_labelled &= g.labels.len() == g.node_count;
            labels.extend(g.labels.iter().cloned());
            offset += g.node_count;
        }
        let g = Self::new(offset, edges)?;
        if all_labelled {
            g.with_labels(labels)
        } else {
            Ok(g)
        }
    }
}

/// A subgraph together with the parent index of each of its nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: WeightedGraph,
    /// `origin[k]` is the parent node that became node `k`.
    pub origin: Vec<usize>,
}

/// Dense symmetric integer Laplacian, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaplacianMatrix {
    size: usize,
    entries: Vec<i64>,
}

impl LaplacianMatrix {
    /// Validates symmetry, non-positive off-diagonal entries and zero row sums.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, GraphError> {
        let n = rows.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(GraphError::NotLaplacian("matrix is not square"));
        }
        for i in 0..n {
            if rows[i].iter().sum::<i64>() != 0 {
                return Err(GraphError::NotLaplacian("row sums must be zero"));
            }
            for j in 0..n {
                if rows[i][j] != rows[j][i] {
                    return Err(GraphError::NotLaplacian("matrix is not symmetric"));
                }
                if i != j && rows[i][j] > 0 {
                    return Err(GraphError::NotLaplacian("off-diagonal entries must be <= 0"));
                }
            }
        }
        Ok(Self { size: n, entries: rows.concat() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.size + j]
    }

    pub fn trace(&self) -> i64 {
        (0..self.size).map(|i| self.get(i, i)).sum()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.size).map(<[i64]>::to_vec).collect()
    }

    /// Recovers the weighted graph whose Laplacian this is.
    pub fn to_graph(&self) -> WeightedGraph {
        let n = self.size;
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j) != 0)
            .map(|(i, j)| (i, j, u32::try_from(-self.get(i, j)).expect("validated weight")));
        WeightedGraph::new(n, edges).expect("validated Laplacian")
    }
}
