//! Synthetic stand-in for photographed scenes: random convex polyhedra,
//! their characteristic views, and degraded query scenes (jitter, deleted
//! edges, occluding overlays) with ground truth.

mod overlay;
mod polyhedron;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::RunConfig;
use crate::graph::WeightedGraph;
use crate::indexdb::{build_database, BuildParams, ModelDatabase, ViewSpec};
use crate::linedraw::{split_image_graph, DrawingError, Junction, LineDrawing};

pub use overlay::overlay;
pub use polyhedron::{random_direction, Plane, PolyEdge, Polyhedron, Vec3, Vertex};
use polyhedron::bounding_diagonal;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("degenerate geometry: {0}")]
    Degenerate(&'static str),
    #[error(transparent)]
    Drawing(DrawingError),
    #[error("gave up after {0} attempts to place an occluder")]
    Placement(usize),
    #[error("invalid synthesis parameter: {0}")]
    Parameter(&'static str),
}

/// How a clean view is degraded into a query scene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneOptions {
    /// Fraction of segments removed (rounded to the nearest count).
    pub deletion_rate: f64,
    pub occluders: usize,
    /// Occluder radius as a fraction of the view's bounding diagonal.
    pub occluder_size: f64,
    /// Largest junction displacement per axis, as a fraction of the diagonal.
    pub jitter: f64,
}

impl Default for SceneOptions {
    fn default() -> Self {
        Self { deletion_rate: 0.15, occluders: 1, occluder_size: 0.2, jitter: 0.004 }
    }
}

impl SceneOptions {
    /// No degradation at all.
    pub fn clean() -> Self {
        Self { deletion_rate: 0.0, occluders: 0, occluder_size: 0.0, jitter: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub objects: usize,
    pub views_per_object: usize,
    pub scenes_per_view: usize,
    /// Face counts are drawn uniformly from this inclusive range.
    pub faces: (usize, usize),
    /// Smallest angle between two view directions of one object.
    pub view_separation_deg: f64,
    pub scene: SceneOptions,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            objects: 6,
            views_per_object: 2,
            scenes_per_view: 9,
            faces: (8, 12),
            view_separation_deg: 70.0,
            scene: SceneOptions::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthView {
    pub object: String,
    pub view: String,
    pub drawing: LineDrawing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthScene {
    pub id: String,
    /// Id of the view the scene was made from.
    pub truth: String,
    pub drawing: LineDrawing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSet {
    pub views: Vec<SynthView>,
    pub scenes: Vec<SynthScene>,
}

const VIEW_SCALE: f64 = 100.0;
const MAX_ATTEMPTS: usize = 200;

fn angle_between(a: Vec3, b: Vec3) -> f64 {
    (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0).acos().to_degrees()
}

/// Generates objects, views and scenes. Each object and each scene draws
/// from its own seeded stream, so output is reproducible and adding scenes
/// does not change the views.
pub fn synthesize(cfg: &SynthConfig) -> Result<SynthSet, SynthError> {
    if cfg.faces.0 < 4 || cfg.faces.0 > cfg.faces.1 {
        return Err(SynthError::Parameter("face range"));
    }
    if cfg.views_per_object == 0 || cfg.objects == 0 {
        return Err(SynthError::Parameter("need at least one object and one view"));
    }
    let mut views = Vec::new();
    for o in 0..cfg.objects {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (o as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut found = None;
        for _ in 0..MAX_ATTEMPTS {
            let faces = rng.random_range(cfg.faces.0..=cfg.faces.1);
            let axes = [rng.random_range(0.7..1.4), rng.random_range(0.7..1.4), rng.random_range(0.7..1.4)];
            let body = Polyhedron::random(&mut rng, faces, axes);
            if let Some(drawings) = general_views(&body, cfg, &mut rng) {
                found = Some(drawings);
                break;
            }
        }
        let drawings = found.ok_or(SynthError::Parameter("view separation cannot be met"))?;
        for (k, drawing) in drawings.into_iter().enumerate() {
            views.push(SynthView { object: format!("obj{o}"), view: format!("obj{o}-v{}", k + 1), drawing });
        }
    }
    let mut scenes = Vec::new();
    for (vi, v) in views.iter().enumerate() {
        for s in 0..cfg.scenes_per_view {
            let stream = cfg.seed.wrapping_add(1 + vi as u64 * 1000 + s as u64).wrapping_mul(0xd134_2543_de82_ef95);
            let mut rng = ChaCha8Rng::seed_from_u64(stream);
            let drawing = degrade(&v.drawing, &cfg.scene, &mut rng)?;
            scenes.push(SynthScene { id: format!("{}-s{}", v.view, s + 1), truth: v.view.clone(), drawing });
        }
    }
    Ok(SynthSet { views, scenes })
}

/// Well-separated general views of one body, or `None` if this body does
/// not admit them within the attempt budget.
fn general_views<R: Rng>(body: &Polyhedron, cfg: &SynthConfig, rng: &mut R) -> Option<Vec<LineDrawing>> {
    let mut eyes: Vec<Vec3> = Vec::new();
    let mut drawings = Vec::new();
    for _ in 0..10 * MAX_ATTEMPTS {
        if eyes.len() == cfg.views_per_object {
            return Some(drawings);
        }
        let eye = random_direction(rng);
        if eyes.iter().any(|&e| angle_between(e, eye) < cfg.view_separation_deg) {
            continue;
        }
        if let Ok(drawing) = body.view(eye, VIEW_SCALE) {
            eyes.push(eye);
            drawings.push(drawing);
        }
    }
    (eyes.len() == cfg.views_per_object).then_some(drawings)
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

/// Random convex polygon (3 or 4 corners) around `center`.
pub fn occluder_polygon<R: Rng>(rng: &mut R, center: (f64, f64), radius: f64) -> LineDrawing {
    loop {
        let start = rng.random_range(0.0..360.0f64);
        let corners: Vec<(f64, f64)> = (0..4)
            .map(|k| {
                let a = (start + 90.0 * k as f64 + rng.random_range(-25.0..25.0)).to_radians();
                let r = radius * rng.random_range(0.75..1.0);
                (round3(center.0 + r * a.cos()), round3(center.1 + r * a.sin()))
            })
            .collect();
        let hull = overlay::convex_hull(&corners);
        if hull.len() < 3 {
            continue;
        }
        let junctions = hull.iter().enumerate().map(|(i, &c)| Junction { id: format!("p{i}"), x: corners[c].0, y: corners[c].1 });
        let k = hull.len();
        let segments = (0..k).map(|i| (format!("q{i}"), format!("p{i}"), format!("p{}", (i + 1) % k)));
        if let Ok(d) = LineDrawing::new(junctions, segments) {
            return d;
        }
    }
}

/// Jitters junctions, deletes a fraction of segments, then lays occluders
/// over the result. Junctions left without segments are dropped.
pub fn degrade<R: Rng>(view: &LineDrawing, opts: &SceneOptions, rng: &mut R) -> Result<LineDrawing, SynthError> {
    if !(0.0..=1.0).contains(&opts.deletion_rate) || opts.jitter < 0.0 || opts.occluder_size < 0.0 {
        return Err(SynthError::Parameter("scene options out of range"));
    }
    let diag = bounding_diagonal(view);
    let amp = opts.jitter * diag;
    let junctions: Vec<Junction> = view
        .junctions()
        .iter()
        .map(|j| {
            if amp == 0.0 {
                return j.clone();
            }
            let (dx, dy) = (rng.random_range(-amp..=amp), rng.random_range(-amp..=amp));
            Junction { id: j.id.clone(), x: round3(j.x + dx), y: round3(j.y + dy) }
        })
        .collect();
    let m = view.segments().len();
    let delete = ((opts.deletion_rate * m as f64).round() as usize).min(m);
    let mut dropped = vec![false; m];
    for s in sample(rng, m, delete) {
        dropped[s] = true;
    }
    let kept: Vec<usize> = (0..m).filter(|&s| !dropped[s]).collect();
    let mut used = vec![false; junctions.len()];
    for &s in &kept {
        for e in view.segments()[s].ends {
            used[e] = true;
        }
    }
    let segments: Vec<(String, String, String)> = kept
        .iter()
        .map(|&s| {
            let seg = &view.segments()[s];
            (seg.id.clone(), junctions[seg.ends[0]].id.clone(), junctions[seg.ends[1]].id.clone())
        })
        .collect();
    let live: Vec<Junction> = junctions.iter().zip(&used).filter(|(_, &u)| u).map(|(j, _)| j.clone()).collect();
    if live.is_empty() {
        return Err(SynthError::Degenerate("every segment was deleted"));
    }
    let mut scene = LineDrawing::new(live, segments).map_err(SynthError::Drawing)?;

    for k in 0..opts.occluders {
        let mut placed = None;
        for _ in 0..MAX_ATTEMPTS {
            let anchor = &scene.junctions()[rng.random_range(0..scene.junctions().len())];
            let radius = opts.occluder_size * diag;
            let center = (anchor.x + rng.random_range(-0.5..0.5) * radius, anchor.y + rng.random_range(-0.5..0.5) * radius);
            let occluder = occluder_polygon(rng, center, radius);
            if let Ok(d) = overlay(&scene, &occluder, &format!("occ{k}.")) {
                placed = Some(d);
                break;
            }
        }
        scene = placed.ok_or(SynthError::Placement(MAX_ATTEMPTS))?;
    }
    Ok(scene)
}

/// Image graphs of a drawing merged into one graph (a CV's view graph).
pub fn view_graph(drawing: &LineDrawing, run: &RunConfig) -> Result<WeightedGraph, DrawingError> {
    let graphs = split_image_graph(drawing, &run.drawing_options())?;
    Ok(WeightedGraph::disjoint_union(&graphs).unwrap_or_else(|_| WeightedGraph::new(1, []).expect("single node")))
}

/// Result for one query scene.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryOutcome {
    pub scene: String,
    pub truth: String,
    pub truth_score: u64,
    pub best_other: u64,
    pub leaders: Vec<String>,
}

impl QueryOutcome {
    /// The true view strictly outscores every other view.
    pub fn correct(&self) -> bool {
        self.truth_score > self.best_other
    }

    /// Truth score over best other score; infinite when only the truth
    /// scored, zero when nothing did.
    pub fn ratio(&self) -> f64 {
        match (self.truth_score, self.best_other) {
            (0, _) => 0.0,
            (_, 0) => f64::INFINITY,
            (t, b) => t as f64 / b as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub objects: usize,
    pub views: usize,
    pub outcomes: Vec<QueryOutcome>,
}

impl Evaluation {
    pub fn accuracy(&self) -> f64 {
        if self.outcomes.is_empty() {
            return 0.0;
        }
        self.outcomes.iter().filter(|o| o.correct()).count() as f64 / self.outcomes.len() as f64
    }

    pub fn median_ratio(&self) -> f64 {
        let mut r: Vec<f64> = self.outcomes.iter().map(QueryOutcome::ratio).collect();
        if r.is_empty() {
            return 0.0;
        }
        r.sort_by(f64::total_cmp);
        let mid = r.len() / 2;
        if r.len() % 2 == 1 {
            r[mid]
        } else if r[mid - 1].is_infinite() {
            f64::INFINITY
        } else {
            (r[mid - 1] + r[mid]) / 2.0
        }
    }
}

/// Builds a database from the clean views of `set`.
pub fn build_view_database(set: &SynthSet, run: &RunConfig) -> Result<ModelDatabase, crate::Error> {
    let specs = set
        .views
        .iter()
        .map(|v| Ok(ViewSpec::new(v.object.clone(), v.view.clone(), view_graph(&v.drawing, run)?)))
        .collect::<Result<Vec<_>, crate::Error>>()?;
    Ok(build_database(&specs, BuildParams::from(run))?)
}

/// Builds a database from the clean views and recognizes every scene.
pub fn evaluate(set: &SynthSet, run: &RunConfig) -> Result<Evaluation, crate::Error> {
    let db = build_view_database(set, run)?;
    let opts = run.drawing_options();
    let mut outcomes = Vec::with_capacity(set.scenes.len());
    for scene in &set.scenes {
        let graphs = split_image_graph(&scene.drawing, &opts)?;
        let tally = db.recognize(&graphs);
        outcomes.push(QueryOutcome {
            scene: scene.id.clone(),
            truth: scene.truth.clone(),
            truth_score: tally.score(&scene.truth).unwrap_or(0),
            best_other: tally.best_other(&scene.truth),
            leaders: tally.leaders().into_iter().map(str::to_string).collect(),
        });
    }
    Ok(Evaluation { objects: db.objects().len(), views: db.views().len(), outcomes })
}
