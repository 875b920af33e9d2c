//! Brute-force isomorphism tools for small graphs: colour refinement, a
//! canonical form found by exhaustive search within colour classes, a
//! backtracking isomorphism test, and enumeration of connected graphs up to
//! isomorphism. Intended for graphs of roughly ten nodes or fewer.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::WeightedGraph;

/// Stable colouring: nodes share a colour only if they are indistinguishable
/// by iterated (colour, weight) neighborhood multisets. Colour ids depend only
/// on structure, not on node order.
pub fn refine_colours(g: &WeightedGraph) -> Vec<usize> {
    let n = g.node_count();
    let mut colours = vec![0usize; n];
    let mut classes = 1;
    loop {
        let keys: Vec<(usize, Vec<(usize, u32)>)> = (0..n)
            .map(|v| {
                let mut nbrs: Vec<(usize, u32)> = g.neighbors(v).iter().map(|&(u, w)| (colours[u], w)).collect();
                nbrs.sort_unstable();
                (colours[v], nbrs)
            })
            .collect();
        let ids: BTreeMap<&(usize, Vec<(usize, u32)>), usize> =
            keys.iter().collect::<BTreeSet<_>>().into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        let next: Vec<usize> = keys.iter().map(|k| ids[k]).collect();
        let count = ids.len();
        colours = next;
        if count == classes {
            return colours;
        }
        classes = count;
    }
}

/// Isomorphism-invariant encoding: node count followed by the weights of the
/// strict upper triangle (column by column) under the lexicographically
/// largest colour-respecting ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u32>);

pub fn canonical_form(g: &WeightedGraph) -> CanonicalForm {
    let n = g.node_count();
    let colours = refine_colours(g);
    // Position p may only hold a node of colour slot_colour[p].
    let mut slot_colour = colours.clone();
    slot_colour.sort_unstable();

    struct Search<'a> {
        g: &'a WeightedGraph,
        colours: &'a [usize],
        slot_colour: &'a [usize],
        order: Vec<usize>,
        used: Vec<bool>,
        code: Vec<u32>,
        best: Option<Vec<u32>>,
    }

    impl Search<'_> {
        fn run(&mut self, pos: usize) {
            let n = self.g.node_count();
            if pos == n {
                if self.best.as_ref().is_none_or(|b| self.code > *b) {
                    self.best = Some(self.code.clone());
                }
                return;
            }
            for v in 0..n {
                if self.used[v] || self.colours[v] != self.slot_colour[pos] {
                    continue;
                }
                let mark = self.code.len();
                for q in 0..pos {
                    self.code.push(self.g.weight(self.order[q], v).unwrap_or(0));
                }
                // Prune when the prefix is already worse than the best code.
                let worse = self.best.as_ref().is_some_and(|b| self.code.as_slice() < &b[..self.code.len()]);
                if !worse {
                    self.used[v] = true;
                    self.order.push(v);
                    self.run(pos + 1);
                    self.order.pop();
                    self.used[v] = false;
                }
                self.code.truncate(mark);
            }
        }
    }

    let mut search = Search {
        g,
        colours: &colours,
        slot_colour: &slot_colour,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        code: Vec::with_capacity(n * (n - 1) / 2),
        best: None,
    };
    search.run(0);
    let mut form = vec![n as u32];
    form.extend(search.best.unwrap_or_default());
    CanonicalForm(form)
}

/// Exact isomorphism test (weights must match) by backtracking over
/// colour-compatible assignments.
pub fn are_isomorphic(a: &WeightedGraph, b: &WeightedGraph) -> bool {
    let n = a.node_count();
    if n != b.node_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut wa: Vec<u32> = a.edges().iter().map(|e| e.weight).collect();
    let mut wb: Vec<u32> = b.edges().iter().map(|e| e.weight).collect();
    wa.sort_unstable();
    wb.sort_unstable();
    if wa != wb {
        return false;
    }
    // Refining the disjoint union makes colours comparable across graphs.
    let union = WeightedGraph::disjoint_union([a, b]).expect("union of valid graphs");
    let colours = refine_colours(&union);
    let (ca, cb) = colours.split_at(n);
    let mut ha = ca.to_vec();
    let mut hb = cb.to_vec();
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb {
        return false;
    }

    fn extend(a: &WeightedGraph, b: &WeightedGraph, ca: &[usize], cb: &[usize], map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let v = map.len();
        if v == a.node_count() {
            return true;
        }
        for u in 0..b.node_count() {
            if used[u] || ca[v] != cb[u] {
                continue;
            }
            let consistent = (0..v).all(|q| a.weight(q, v) == b.weight(map[q], u));
            if consistent {
                used[u] = true;
                map.push(u);
                if extend(a, b, ca, cb, map, used) {
                    return true;
                }
                map.pop();
                used[u] = false;
            }
        }
        false
    }

    extend(a, b, ca, cb, &mut Vec::with_capacity(n), &mut vec![false; n])
}

/// One representative per isomorphism class of connected binary graphs on
/// `n` nodes, sorted by canonical form.
///
/// Every connected graph has a vertex whose removal leaves it connected (a
/// leaf of any spanning tree), so extending each class on `n − 1` nodes by a
/// vertex joined to every non-empty neighbor set reaches every class.
pub fn connected_graphs(n: usize) -> Vec<WeightedGraph> {
    assert!(n >= 1, "graphs have at least one node");
    let mut reps = vec![WeightedGraph::new(1, []).expect("single node")];
    for size in 2..=n {
        let mut classes: BTreeMap<CanonicalForm, WeightedGraph> = BTreeMap::new();
        for base in &reps {
            let old = size - 1;
            for mask in 1usize..(1 << old) {
                let edges = base
                    .edges()
                    .iter()
                    .map(|e| (e.a, e.b))
                    .chain((0..old).filter(|&i| mask & (1 << i) != 0).map(|i| (i, old)));
                let g = WeightedGraph::unweighted(size, edges).expect("valid extension");
                classes.entry(canonical_form(&g)).or_insert(g);
            }
        }
        reps = classes.into_values().collect();
    }
    reps
}
