//! Convex polyhedra as intersections of half-spaces, and their orthographic
//! line drawings with hidden edges removed.

use rand::Rng;

use super::SynthError;
use crate::linedraw::{angle_deg, classify_angles, separation, Junction, JunctionType, LineDrawing};

pub type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(a: Vec3) -> Vec3 {
    let len = dot(a, a).sqrt();
    [a[0] / len, a[1] / len, a[2] / len]
}

/// Uniformly random unit vector.
pub fn random_direction<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let len2 = dot(v, v);
        if len2 > 0.01 && len2 <= 1.0 {
            return normalize(v);
        }
    }
}

/// Half-space `normal · x <= offset`, with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub position: Vec3,
    pub planes: [usize; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyEdge {
    pub ends: [usize; 2],
    pub faces: [usize; 2],
}

/// A bounded simple convex polyhedron: every vertex lies on exactly three
/// faces and meets exactly three edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    planes: Vec<Plane>,
    vertices: Vec<Vertex>,
    edges: Vec<PolyEdge>,
}

const TIGHT: f64 = 1e-7;

/// Views are rejected when two segments at a junction come within this many
/// degrees of collinear, so that default-tolerance classification is stable.
pub const ALIGNMENT_MARGIN_DEG: f64 = 12.0;

const EDGE_ON: f64 = 0.01;

fn solve3(p: [&Plane; 3]) -> Option<Vec3> {
    let [a, b, c] = p.map(|q| q.normal);
    let det = dot(a, cross(b, c));
    if det.abs() < 1e-9 {
        return None;
    }
    let (bc, ca, ab) = (cross(b, c), cross(c, a), cross(a, b));
    let d = [p[0].offset, p[1].offset, p[2].offset];
    Some([0, 1, 2].map(|i| (d[0] * bc[i] + d[1] * ca[i] + d[2] * ab[i]) / det))
}

impl Polyhedron {
    pub fn from_planes(planes: Vec<Plane>) -> Result<Self, SynthError> {
        let f = planes.len();
        let mut vertices = Vec::new();
        for i in 0..f {
            for j in i + 1..f {
                for k in j + 1..f {
                    let Some(p) = solve3([&planes[i], &planes[j], &planes[k]]) else { continue };
                    let slack: Vec<f64> = planes.iter().map(|q| dot(q.normal, p) - q.offset).collect();
                    if slack.iter().any(|&s| s > TIGHT) {
                        continue;
                    }
                    if slack.iter().filter(|s| s.abs() <= TIGHT).count() != 3 {
                        return Err(SynthError::Degenerate("a vertex lies on more than three faces"));
                    }
                    vertices.push(Vertex { position: p, planes: [i, j, k] });
                }
            }
        }
        let mut edges = Vec::new();
        let mut degree = vec![0usize; vertices.len()];
        for a in 0..vertices.len() {
            for b in a + 1..vertices.len() {
                let shared: Vec<usize> =
                    vertices[a].planes.iter().copied().filter(|p| vertices[b].planes.contains(p)).collect();
                if let [f1, f2] = shared[..] {
                    edges.push(PolyEdge { ends: [a, b], faces: [f1, f2] });
                    degree[a] += 1;
                    degree[b] += 1;
                }
            }
        }
        if vertices.len() < 4 || degree.iter().any(|&d| d != 3) {
            return Err(SynthError::Degenerate("half-spaces do not bound a simple polyhedron"));
        }
        Ok(Self { planes, vertices, edges })
    }

    /// Axis-aligned box with the given half-extents.
    pub fn cuboid(half: Vec3) -> Self {
        let mut planes = Vec::new();
        for axis in 0..3 {
            for sign in [1.0, -1.0] {
                let mut normal = [0.0; 3];
                normal[axis] = sign;
                planes.push(Plane { normal, offset: half[axis] });
            }
        }
        Self::from_planes(planes).expect("a box is a simple polyhedron")
    }

    /// Random polyhedron circumscribing an ellipsoid with semi-axes `axes`:
    /// each face is a tangent plane pushed inward by a random amount. Face
    /// normals are kept apart and very short edges are refused, so that the
    /// result has no sliver faces.
    pub fn random<R: Rng>(rng: &mut R, faces: usize, axes: Vec3) -> Self {
        let spacing = (4.0 * std::f64::consts::PI / faces as f64).sqrt();
        let min_cos = (0.55 * spacing).cos();
        let scale = axes.iter().sum::<f64>() / 3.0;
        loop {
            let mut normals: Vec<Vec3> = Vec::with_capacity(faces);
            let mut tries = 0;
            while normals.len() < faces && tries < 10_000 {
                tries += 1;
                let n = random_direction(rng);
                if normals.iter().all(|&m| dot(m, n) < min_cos) {
                    normals.push(n);
                }
            }
            if normals.len() < faces {
                continue;
            }
            let planes = normals
                .into_iter()
                .map(|normal| {
                    let support = (0..3).map(|i| (axes[i] * normal[i]).powi(2)).sum::<f64>().sqrt();
                    Plane { normal, offset: support * rng.random_range(0.9..1.0) }
                })
                .collect();
            let Ok(p) = Self::from_planes(planes) else { continue };
            let shortest = p
                .edges
                .iter()
                .map(|e| {
                    let [a, b] = e.ends.map(|v| p.vertices[v].position);
                    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            if p.planes_used() == faces && shortest >= 0.12 * scale * spacing {
                return p;
            }
        }
    }

    fn planes_used(&self) -> usize {
        let mut used = vec![false; self.planes.len()];
        for v in &self.vertices {
            for &p in &v.planes {
                used[p] = true;
            }
        }
        used.iter().filter(|&&u| u).count()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[PolyEdge] {
        &self.edges
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    /// Orthographic view from direction `eye` (pointing toward the viewer),
    /// scaled by `scale`, with coordinates rounded to 1/1000. Junction ids
    /// are `v<vertex>`, segment ids `e<a>_<b>`.
    ///
    /// Fails for accidental viewpoints: a face seen almost edge-on, a
    /// junction that would read as a T, or a very short projected edge.
    pub fn view(&self, eye: Vec3, scale: f64) -> Result<LineDrawing, SynthError> {
        let eye = normalize(eye);
        let facing: Vec<f64> = self.planes.iter().map(|p| dot(p.normal, eye)).collect();
        let helper = if eye[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let u = normalize(cross(eye, helper));
        let w = cross(eye, u);
        let project = |p: Vec3| {
            let round = |x: f64| (x * scale * 1000.0).round() / 1000.0;
            (round(dot(p, u)), round(dot(p, w)))
        };

        let mut visible_edges = Vec::new();
        for e in &self.edges {
            let [f1, f2] = e.faces;
            if facing[f1] > 0.0 || facing[f2] > 0.0 {
                if facing[f1].abs() < EDGE_ON || facing[f2].abs() < EDGE_ON {
                    return Err(SynthError::Degenerate("a face is seen nearly edge-on"));
                }
                visible_edges.push(e.ends);
            }
        }
        let mut shown = vec![false; self.vertices.len()];
        for ends in &visible_edges {
            for &v in ends {
                shown[v] = true;
            }
        }
        let junctions: Vec<Junction> = (0..self.vertices.len())
            .filter(|&v| shown[v])
            .map(|v| {
                let (x, y) = project(self.vertices[v].position);
                Junction { id: format!("v{v}"), x, y }
            })
            .collect();
        let segments = visible_edges.iter().map(|&[a, b]| (format!("e{a}_{b}"), format!("v{a}"), format!("v{b}")));
        let drawing = LineDrawing::new(junctions, segments).map_err(SynthError::Drawing)?;

        let size = bounding_diagonal(&drawing);
        for s in 0..drawing.segments().len() {
            if drawing.segment_length(s) < 0.015 * size {
                return Err(SynthError::Degenerate("a projected edge is too short"));
            }
        }
        for j in 0..drawing.junctions().len() {
            let angles: Vec<f64> = drawing.incident(j).iter().map(|&s| angle_deg(drawing.direction(s, j))).collect();
            let straight = angles.iter().enumerate().any(|(a, &x)| angles[a + 1..].iter().any(|&y| separation(x, y) > 180.0 - ALIGNMENT_MARGIN_DEG));
            if straight || !matches!(classify_angles(&angles, ALIGNMENT_MARGIN_DEG), JunctionType::L | JunctionType::Y | JunctionType::Arrow) {
                return Err(SynthError::Degenerate("accidental junction alignment"));
            }
        }
        Ok(drawing)
    }
}

pub(crate) fn bounding_diagonal(d: &LineDrawing) -> f64 {
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for j in d.junctions() {
        lo = (lo.0.min(j.x), lo.1.min(j.y));
        hi = (hi.0.max(j.x), hi.1.max(j.y));
    }
    (hi.0 - lo.0).hypot(hi.1 - lo.1)
}
