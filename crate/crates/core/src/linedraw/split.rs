//! From a raw line drawing to the weighted graphs worth indexing.
//!
//! 1. Drop dangling segments (an end of degree 1) until none remain.
//! 2. At each T junction detach the stem, leaving it with a fresh terminal
//!    end, then prune again.
//! 3. Fuse collinear chains: a degree-2 junction whose two segments are
//!    collinear disappears and its segments merge.
//! 4. Repeat until a pass neither cuts nor fuses, then split into connected
//!    components and keep those with `|E| >= |V|`, weighted by edge appearance.

use std::collections::{BTreeSet, HashMap};

use super::appearance::{edge_appearance, UNLABELLED_WEIGHT};
use super::{angle_deg, classify_angles, is_collinear, separation, DrawingError, DrawingOptions, Junction, JunctionType, LineDrawing, Segment};
use crate::decompose::is_relevant;
use crate::graph::WeightedGraph;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitReport {
    /// Pruning rounds summed over all passes.
    pub prune_rounds: usize,
    /// Most rounds any single pruning pass needed to reach its fixpoint.
    pub max_prune_rounds: usize,
    pub pruned_segments: usize,
    pub t_cuts: usize,
    pub fusions: usize,
    pub components: usize,
    pub discarded_components: usize,
}

struct Work {
    junctions: Vec<Junction>,
    segments: Vec<Option<Segment>>,
    incidence: Vec<BTreeSet<usize>>,
    collinear_deg: f64,
}

impl Work {
    fn new(d: &LineDrawing, collinear_deg: f64) -> Self {
        let incidence = (0..d.junctions().len()).map(|j| d.incident(j).iter().copied().collect()).collect();
        Self {
            junctions: d.junctions().to_vec(),
            segments: d.segments().iter().cloned().map(Some).collect(),
            incidence,
            collinear_deg,
        }
    }

    fn seg(&self, s: usize) -> &Segment {
        self.segments[s].as_ref().expect("live segment")
    }

    fn other_end(&self, s: usize, from: usize) -> usize {
        let [a, b] = self.seg(s).ends;
        if a == from { b } else { a }
    }

    fn angle(&self, s: usize, from: usize) -> f64 {
        let (p, q) = (&self.junctions[from], &self.junctions[self.other_end(s, from)]);
        angle_deg((q.x - p.x, q.y - p.y))
    }

    fn remove(&mut self, s: usize) {
        if let Some(seg) = self.segments[s].take() {
            for j in seg.ends {
                self.incidence[j].remove(&s);
            }
        }
    }

    fn live(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.segments.len()).filter(|&s| self.segments[s].is_some())
    }

    /// Returns (rounds, removed).
    fn prune(&mut self) -> (usize, usize) {
        let (mut rounds, mut removed) = (0, 0);
        loop {
            let dangling: Vec<usize> =
                self.live().filter(|&s| self.seg(s).ends.iter().any(|&j| self.incidence[j].len() == 1)).collect();
            if dangling.is_empty() {
                return (rounds, removed);
            }
            rounds += 1;
            removed += dangling.len();
            for s in dangling {
                self.remove(s);
            }
        }
    }

    fn cut_t_junctions(&mut self) -> usize {
        let mut cuts = Vec::new();
        for j in 0..self.junctions.len() {
            if self.incidence[j].len() != 3 {
                continue;
            }
            let segs: Vec<usize> = self.incidence[j].iter().copied().collect();
            let angles: Vec<f64> = segs.iter().map(|&s| self.angle(s, j)).collect();
            if classify_angles(&angles, self.collinear_deg) != JunctionType::T {
                continue;
            }
            // The bar is the most nearly opposite pair; the stem is the rest.
            let stem = (0..3)
                .max_by(|&a, &b| {
                    let bar = |k: usize| {
                        let (p, q) = [(1, 2), (0, 2), (0, 1)][k];
                        separation(angles[p], angles[q])
                    };
                    bar(a).total_cmp(&bar(b))
                })
                .expect("three segments");
            cuts.push((j, segs[stem]));
        }
        for (k, &(j, stem)) in cuts.iter().enumerate() {
            let fresh = self.junctions.len();
            let base = &self.junctions[j];
            self.junctions.push(Junction { id: format!("{}~cut{k}", base.id), x: base.x, y: base.y });
            self.incidence.push(BTreeSet::from([stem]));
            self.incidence[j].remove(&stem);
            let seg = self.segments[stem].as_mut().expect("live stem");
            for end in &mut seg.ends {
                if *end == j {
                    *end = fresh;
                    break;
                }
            }
        }
        cuts.len()
    }

    fn joined(&self, a: usize, b: usize) -> bool {
        self.incidence[a].iter().any(|&s| self.other_end(s, a) == b)
    }

    fn fuse_collinear(&mut self) -> usize {
        let mut fusions = 0;
        let mut changed = true;
        while changed {
            changed = false;
            for j in 0..self.junctions.len() {
                if self.incidence[j].len() != 2 {
                    continue;
                }
                let mut it = self.incidence[j].iter().copied();
                let (keep, drop) = (it.next().expect("two"), it.next().expect("two"));
                let (a, b) = (self.other_end(keep, j), self.other_end(drop, j));
                if a == b || self.joined(a, b) || !is_collinear(self.angle(keep, j), self.angle(drop, j), self.collinear_deg) {
                    continue;
                }
                let merged_id = format!("{}+{}", self.seg(keep).id, self.seg(drop).id);
                self.remove(drop);
                self.incidence[j].remove(&keep);
                let seg = self.segments[keep].as_mut().expect("live segment");
                for end in &mut seg.ends {
                    if *end == j {
                        *end = b;
                    }
                }
                seg.id = merged_id;
                self.incidence[b].insert(keep);
                fusions += 1;
                changed = true;
            }
        }
        fusions
    }

    fn into_drawing(self) -> LineDrawing {
        let keep: Vec<usize> = (0..self.junctions.len()).filter(|&j| !self.incidence[j].is_empty()).collect();
        let mut index = vec![usize::MAX; self.junctions.len()];
        for (k, &j) in keep.iter().enumerate() {
            index[j] = k;
        }
        let junctions = keep.iter().map(|&j| self.junctions[j].clone()).collect();
        let segments = self
            .segments
            .into_iter()
            .flatten()
            .map(|s| Segment { id: s.id, ends: s.ends.map(|j| index[j]) })
            .collect();
        LineDrawing::assemble(junctions, segments)
    }
}

/// Runs pruning, T-cuts and fusion to a joint fixpoint. The result has no
/// terminal and no T junctions; junctions left without segments are dropped.
pub fn simplify(d: &LineDrawing, opts: &DrawingOptions) -> (LineDrawing, SplitReport) {
    let mut work = Work::new(d, opts.collinear_deg);
    let mut report = SplitReport::default();
    let prune = |work: &mut Work, report: &mut SplitReport| {
        let (rounds, removed) = work.prune();
        report.prune_rounds += rounds;
        report.max_prune_rounds = report.max_prune_rounds.max(rounds);
        report.pruned_segments += removed;
    };
    loop {
        prune(&mut work, &mut report);
        let cuts = work.cut_t_junctions();
        report.t_cuts += cuts;
        if cuts > 0 {
            prune(&mut work, &mut report);
        }
        let fusions = work.fuse_collinear();
        report.fusions += fusions;
        if cuts == 0 && fusions == 0 {
            break;
        }
    }
    (work.into_drawing(), report)
}

pub fn split_image_graph_with_report(
    d: &LineDrawing,
    opts: &DrawingOptions,
) -> Result<(Vec<WeightedGraph>, SplitReport), DrawingError> {
    let (clean, mut report) = simplify(d, opts);
    if clean.junctions().is_empty() {
        return Ok((Vec::new(), report));
    }
    let topology = WeightedGraph::unweighted(clean.junctions().len(), clean.segments().iter().map(|s| (s.ends[0], s.ends[1])))
        .expect("validated drawing has a simple graph");
    let segment_of: HashMap<(usize, usize), usize> =
        clean.segments().iter().enumerate().map(|(k, s)| ((s.ends[0].min(s.ends[1]), s.ends[0].max(s.ends[1])), k)).collect();
    let mut graphs = Vec::new();
    for comp in topology.connected_components() {
        report.components += 1;
        if !is_relevant(&comp.graph) {
            report.discarded_components += 1;
            continue;
        }
        let mut edges = Vec::with_capacity(comp.graph.edge_count());
        for e in comp.graph.edges() {
            let (ja, jb) = (comp.origin[e.a], comp.origin[e.b]);
            let seg = segment_of[&(ja.min(jb), ja.max(jb))];
            let weight = match edge_appearance(&clean, seg, opts) {
                Ok(app) => app.label,
                Err(DrawingError::NoAppearance { junction, kind: JunctionType::HighDegree, .. }) => {
                    if opts.strict {
                        return Err(DrawingError::HighDegree(junction));
                    }
                    UNLABELLED_WEIGHT
                }
                Err(other) => unreachable!("simplified drawings have only L/Y/Arrow/high-degree junctions: {other}"),
            };
            edges.push((e.a, e.b, weight));
        }
        let labels = comp.origin.iter().map(|&j| clean.junctions()[j].id.clone()).collect();
        let graph = WeightedGraph::new(comp.graph.node_count(), edges)
            .and_then(|g| g.with_labels(labels))
            .expect("component of a simple graph");
        graphs.push(graph);
    }
    Ok((graphs, report))
}

/// Relevant weighted image graphs of a drawing.
pub fn split_image_graph(d: &LineDrawing, opts: &DrawingOptions) -> Result<Vec<WeightedGraph>, DrawingError> {
    split_image_graph_with_report(d, opts).map(|(graphs, _)| graphs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linedraw::tests::{cube_text, square_text};

    fn opts() -> DrawingOptions {
        DrawingOptions::default()
    }

    fn is_cycle(g: &WeightedGraph, n: usize) -> bool {
        g.node_count() == n && g.edge_count() == n && g.degree_profile().iter().all(|&d| d == 2) && g.is_connected()
    }

    #[test]
    fn square_with_stub() {
        let text = format!("{}junction e 20 0\nsegment be b e\n", square_text());
        let d = LineDrawing::parse(&text).unwrap();
        let graphs = split_image_graph(&d, &opts()).unwrap();
        assert_eq!(graphs.len(), 1);
        assert!(is_cycle(&graphs[0], 4));
        let mut labels = graphs[0].labels().to_vec();
        labels.sort();
        assert_eq!(labels, ["a", "b", "c", "d"]);
    }

    #[test]
    fn lone_path_is_irrelevant() {
        let d = LineDrawing::parse("junction a 0 0\njunction b 5 1\njunction c 9 7\nsegment ab a b\nsegment bc b c\n").unwrap();
        let (graphs, report) = split_image_graph_with_report(&d, &opts()).unwrap();
        assert!(graphs.is_empty());
        assert_eq!(report.pruned_segments, 2);
    }

    #[test]
    fn t_connector_between_two_squares() {
        // Squares side by side; a bridge joins the middles of facing sides,
        // making a T at each end. Cutting both stems isolates the bridge, and
        // fusion restores each square's side.
        let text = "junction a0 0 0\njunction a1 4 0\njunction a2 4 4\njunction a3 0 4\njunction at 4 2\n\
                    junction b0 10 0\njunction b1 14 0\njunction b2 14 4\njunction b3 10 4\njunction bt 10 2\n\
                    segment s1 a0 a1\nsegment s2 a1 at\nsegment s3 at a2\nsegment s4 a2 a3\nsegment s5 a3 a0\n\
                    segment r1 b0 b1\nsegment r2 b1 b2\nsegment r3 b2 b3\nsegment r4 b3 bt\nsegment r5 bt b0\n\
                    segment bridge at bt\n";
        let d = LineDrawing::parse(text).unwrap();
        let (graphs, report) = split_image_graph_with_report(&d, &opts()).unwrap();
        assert_eq!(report.t_cuts, 2);
        assert_eq!(report.fusions, 2);
        assert_eq!(graphs.len(), 2);
        assert!(graphs.iter().all(|g| is_cycle(g, 4)));
    }

    #[test]
    fn occluded_square_loses_its_cycle() {
        // Front square f0..f3 hides the middle of the back square's bottom
        // edge, which ends in T junctions on the front square's sides. The
        // stems are the back edge's visible pieces; once detached, the back
        // square's remains form an open chain and are pruned. Only the front
        // square survives, its split sides fused back together.
        let text = "junction b0 0 0\njunction b1 10 0\njunction b2 10 10\njunction b3 0 10\n\
                    junction f0 3 -2\njunction f1 7 -2\njunction f2 7 2\njunction f3 3 2\n\
                    junction tl 3 0\njunction tr 7 0\n\
                    segment back_l b0 tl\nsegment back_r tr b1\nsegment bs1 b1 b2\nsegment bs2 b2 b3\nsegment bs3 b3 b0\n\
                    segment f01 f0 f1\nsegment f1r f1 tr\nsegment fr2 tr f2\nsegment f23 f2 f3\nsegment f3l f3 tl\nsegment fl0 tl f0\n";
        let d = LineDrawing::parse(text).unwrap();
        let (graphs, report) = split_image_graph_with_report(&d, &opts()).unwrap();
        assert_eq!(report.t_cuts, 2);
        assert_eq!(graphs.len(), 1);
        assert!(is_cycle(&graphs[0], 4));
        let mut labels = graphs[0].labels().to_vec();
        labels.sort();
        assert_eq!(labels, ["f0", "f1", "f2", "f3"]);
    }

    #[test]
    fn fusion_preserves_length() {
        // Each side of a square split into three collinear pieces.
        let mut text = String::new();
        let corners = [(0.0, 0.0), (9.0, 0.0), (9.0, 9.0), (0.0, 9.0)];
        let mut ids = Vec::new();
        for side in 0..4 {
            let (p, q) = (corners[side], corners[(side + 1) % 4]);
            for step in 0..3 {
                let t = step as f64 / 3.0;
                let id = format!("j{side}_{step}");
                text += &format!("junction {id} {} {}\n", p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1));
                ids.push(id);
            }
        }
        for k in 0..ids.len() {
            text += &format!("segment s{k} {} {}\n", ids[k], ids[(k + 1) % ids.len()]);
        }
        let d = LineDrawing::parse(&text).unwrap();
        let (clean, report) = simplify(&d, &opts());
        assert_eq!(report.fusions, 8);
        assert_eq!(clean.segments().len(), 4);
        assert!((clean.total_length() - d.total_length()).abs() < 1e-9);
    }

    #[test]
    fn cube_becomes_one_weighted_graph() {
        let d = LineDrawing::parse(cube_text()).unwrap();
        let graphs = split_image_graph(&d, &opts()).unwrap();
        assert_eq!(graphs.len(), 1);
        let g = &graphs[0];
        assert_eq!((g.node_count(), g.edge_count()), (7, 9));
        assert!(g.edges().iter().all(|e| (1..=36).contains(&e.weight)));
        // Rotating and translating the drawing keeps every label.
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let moved = LineDrawing::new(
            d.junctions().iter().map(|j| Junction { id: j.id.clone(), x: c * j.x - s * j.y + 40.0, y: s * j.x + c * j.y - 7.0 }),
            d.segments().iter().map(|s| (s.id.clone(), d.junctions()[s.ends[0]].id.clone(), d.junctions()[s.ends[1]].id.clone())),
        )
        .unwrap();
        assert_eq!(split_image_graph(&moved, &opts()).unwrap(), graphs);
    }

    #[test]
    fn comb_prunes_to_fixpoint() {
        // A spine with teeth of length 3 hanging off a square.
        let mut text = String::from(square_text());
        for t in 0..6 {
            let x = 20.0 + 5.0 * t as f64;
            text += &format!("junction s{t} {x} 0\n");
            let prev = if t == 0 { "b".to_string() } else { format!("s{}", t - 1) };
            text += &format!("segment sp{t} {prev} s{t}\n");
            for k in 1..=3 {
                text += &format!("junction t{t}_{k} {x} {}\n", -3.0 * k as f64 - 0.1 * t as f64);
                let from = if k == 1 { format!("s{t}") } else { format!("t{t}_{}", k - 1) };
                text += &format!("segment tt{t}_{k} {from} t{t}_{k}\n");
            }
        }
        let d = LineDrawing::parse(&text).unwrap();
        let (graphs, report) = split_image_graph_with_report(&d, &opts()).unwrap();
        assert_eq!(graphs.len(), 1);
        assert!(is_cycle(&graphs[0], 4));
        assert!(report.max_prune_rounds <= d.segments().len());
        assert_eq!(report.pruned_segments, d.segments().len() - 4);
    }

    #[test]
    fn high_degree_junctions() {
        // Two triangles sharing a vertex: degree 4 at the shared junction.
        let text = "junction o 0 0\njunction a 5 1\njunction b 4 6\njunction c -5 -1\njunction d -3 -6\n\
                    segment oa o a\nsegment ab a b\nsegment bo b o\nsegment oc o c\nsegment cd c d\nsegment do d o\n";
        let d = LineDrawing::parse(text).unwrap();
        let graphs = split_image_graph(&d, &opts()).unwrap();
        assert_eq!(graphs.len(), 1);
        let hub_edges = graphs[0].edges().iter().filter(|e| e.weight == UNLABELLED_WEIGHT).count();
        assert_eq!(hub_edges, 4);
        let strict = DrawingOptions { strict: true, ..opts() };
        assert_eq!(split_image_graph(&d, &strict), Err(DrawingError::HighDegree("o".into())));
    }
}
