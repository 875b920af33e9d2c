//! Planar line drawings: straight segments between junctions.
//!
//! Text format, `#` starts a comment:
//!
//! ```text
//! junction a 0 0
//! junction b 10 0
//! segment s1 a b
//! ```
//!
//! Ids are arbitrary whitespace-free tokens; lines may appear in any order.

mod appearance;
mod split;

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

pub use appearance::{
    canonical_label, catalogue, edge_appearance, EdgeAppearance, EndpointDescriptor, VertexKind, UNLABELLED_WEIGHT,
};
pub use split::{simplify, split_image_graph, split_image_graph_with_report, SplitReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DrawingError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("drawing has no junctions")]
    NoJunctions,
    #[error("invalid id '{0}'")]
    BadId(String),
    #[error("duplicate junction id '{0}'")]
    DuplicateJunction(String),
    #[error("duplicate segment id '{0}'")]
    DuplicateSegment(String),
    #[error("segment '{segment}' references unknown junction '{junction}'")]
    UnknownJunction { segment: String, junction: String },
    #[error("segment '{0}' has zero length")]
    ZeroLength(String),
    #[error("junctions '{0}' and '{1}' share coordinates")]
    Coincident(String, String),
    #[error("segments '{0}' and '{1}' join the same junctions")]
    Parallel(String, String),
    #[error("junction coordinate is not finite")]
    NonFinite,
    #[error("segment '{segment}' has no appearance: endpoint '{junction}' is {kind:?}")]
    NoAppearance { segment: String, junction: String, kind: JunctionType },
    #[error("junction '{0}' joins more than three segments")]
    HighDegree(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Junction {
    pub id: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub id: String,
    /// Junction indices; orientation runs from `ends[0]` to `ends[1]`.
    pub ends: [usize; 2],
}

/// Junction shape, determined by the directions of its incident segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JunctionType {
    Isolated,
    Terminal,
    L,
    Y,
    Arrow,
    T,
    HighDegree,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrawingOptions {
    /// Two directions closer than this to opposite count as collinear.
    pub collinear_deg: f64,
    /// Reject drawings whose extracted graphs keep a junction of degree > 3.
    pub strict: bool,
}

impl Default for DrawingOptions {
    fn default() -> Self {
        Self { collinear_deg: 10.0, strict: false }
    }
}

#[derive(Debug, Clone, Copy)]
enum Origin {
    Whole,
    Junction(usize),
    Segment(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineDrawing {
    junctions: Vec<Junction>,
    segments: Vec<Segment>,
    incidence: Vec<Vec<usize>>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && !id.contains(char::is_whitespace) && !id.contains('#')
}

impl LineDrawing {
    /// Builds and validates a drawing; segments name their junctions by id.
    pub fn new<J, S>(junctions: J, segments: S) -> Result<Self, DrawingError>
    where
        J: IntoIterator<Item = Junction>,
        S: IntoIterator<Item = (String, String, String)>,
    {
        Self::validate(junctions.into_iter().collect(), segments.into_iter().collect()).map_err(|(e, _)| e)
    }

    /// On failure also reports which input item was at fault.
    fn validate(junctions: Vec<Junction>, segments: Vec<(String, String, String)>) -> Result<Self, (DrawingError, Origin)> {
        if junctions.is_empty() {
            return Err((DrawingError::NoJunctions, Origin::Whole));
        }
        let mut index = HashMap::new();
        let mut coords: HashMap<(u64, u64), usize> = HashMap::new();
        for (k, j) in junctions.iter().enumerate() {
            let fail = |e| Err((e, Origin::Junction(k)));
            if !valid_id(&j.id) {
                return fail(DrawingError::BadId(j.id.clone()));
            }
            if !j.x.is_finite() || !j.y.is_finite() {
                return fail(DrawingError::NonFinite);
            }
            if index.insert(j.id.clone(), k).is_some() {
                return fail(DrawingError::DuplicateJunction(j.id.clone()));
            }
            // Adding 0.0 folds -0.0 into 0.0.
            let key = ((j.x + 0.0).to_bits(), (j.y + 0.0).to_bits());
            if let Some(&other) = coords.get(&key) {
                return fail(DrawingError::Coincident(junctions[other].id.clone(), j.id.clone()));
            }
            coords.insert(key, k);
        }
        let mut seg_ids = HashSet::new();
        let mut pairs: HashMap<(usize, usize), String> = HashMap::new();
        let mut list = Vec::with_capacity(segments.len());
        for (k, (id, a, b)) in segments.into_iter().enumerate() {
            let origin = Origin::Segment(k);
            if !valid_id(&id) {
                return Err((DrawingError::BadId(id), origin));
            }
            if !seg_ids.insert(id.clone()) {
                return Err((DrawingError::DuplicateSegment(id), origin));
            }
            let lookup = |j: &str| {
                index
                    .get(j)
                    .copied()
                    .ok_or_else(|| (DrawingError::UnknownJunction { segment: id.clone(), junction: j.to_string() }, origin))
            };
            let (ia, ib) = (lookup(&a)?, lookup(&b)?);
            if ia == ib {
                return Err((DrawingError::ZeroLength(id), origin));
            }
            if let Some(other) = pairs.insert((ia.min(ib), ia.max(ib)), id.clone()) {
                return Err((DrawingError::Parallel(other, id), origin));
            }
            list.push(Segment { id, ends: [ia, ib] });
        }
        Ok(Self::assemble(junctions, list))
    }

    /// Trusted constructor for already-validated parts.
    fn assemble(junctions: Vec<Junction>, segments: Vec<Segment>) -> Self {
        let mut incidence = vec![Vec::new(); junctions.len()];
        for (k, s) in segments.iter().enumerate() {
            incidence[s.ends[0]].push(k);
            incidence[s.ends[1]].push(k);
        }
        Self { junctions, segments, incidence }
    }

    pub fn parse(text: &str) -> Result<Self, DrawingError> {
        let mut junctions = Vec::new();
        let mut junction_lines = Vec::new();
        let mut segments = Vec::new();
        let mut segment_lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or_default();
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let err = |message: String| DrawingError::Parse { line, message };
            match tokens.as_slice() {
                [] => {}
                ["junction", id, x, y] => {
                    let coord = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| err(format!("bad coordinate '{t}'")));
                    junctions.push(Junction { id: id.to_string(), x: coord(x)?, y: coord(y)? });
                    junction_lines.push(line);
                }
                ["segment", id, a, b] => {
                    segments.push((id.to_string(), a.to_string(), b.to_string()));
                    segment_lines.push(line);
                }
                _ => return Err(err(format!("expected 'junction <id> <x> <y>' or 'segment <id> <j1> <j2>', got '{}'", content.trim()))),
            }
        }
        Self::validate(junctions, segments).map_err(|(e, origin)| match origin {
            Origin::Whole => e,
            Origin::Junction(k) => DrawingError::Parse { line: junction_lines[k], message: e.to_string() },
            Origin::Segment(k) => DrawingError::Parse { line: segment_lines[k], message: e.to_string() },
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for j in &self.junctions {
            let _ = writeln!(out, "junction {} {} {}", j.id, j.x, j.y);
        }
        for s in &self.segments {
            let _ = writeln!(out, "segment {} {} {}", s.id, self.junctions[s.ends[0]].id, self.junctions[s.ends[1]].id);
        }
        out
    }

    pub fn junctions(&self) -> &[Junction] {
        &self.junctions
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Segment indices meeting at junction `j`.
    pub fn incident(&self, j: usize) -> &[usize] {
        &self.incidence[j]
    }

    pub fn junction_index(&self, id: &str) -> Option<usize> {
        self.junctions.iter().position(|j| j.id == id)
    }

    pub fn segment_index(&self, id: &str) -> Option<usize> {
        self.segments.iter().position(|s| s.id == id)
    }

    /// The far end of segment `seg` as seen from junction `from`.
    pub fn other_end(&self, seg: usize, from: usize) -> usize {
        let [a, b] = self.segments[seg].ends;
        if a == from { b } else { a }
    }

    /// Vector from junction `from` along segment `seg`.
    pub fn direction(&self, seg: usize, from: usize) -> (f64, f64) {
        let to = self.other_end(seg, from);
        let (p, q) = (&self.junctions[from], &self.junctions[to]);
        (q.x - p.x, q.y - p.y)
    }

    pub fn segment_length(&self, seg: usize) -> f64 {
        let [a, b] = self.segments[seg].ends;
        let (p, q) = (&self.junctions[a], &self.junctions[b]);
        (q.x - p.x).hypot(q.y - p.y)
    }

    pub fn total_length(&self) -> f64 {
        (0..self.segments.len()).map(|s| self.segment_length(s)).sum()
    }

    pub fn classify(&self, j: usize, collinear_deg: f64) -> JunctionType {
        let angles: Vec<f64> = self.incidence[j].iter().map(|&s| angle_deg(self.direction(s, j))).collect();
        classify_angles(&angles, collinear_deg)
    }

    pub fn classify_by_id(&self, id: &str, collinear_deg: f64) -> Option<JunctionType> {
        self.junction_index(id).map(|j| self.classify(j, collinear_deg))
    }
}

/// Direction angle in `[0, 360)`.
pub(crate) fn angle_deg((dx, dy): (f64, f64)) -> f64 {
    dy.atan2(dx).to_degrees().rem_euclid(360.0)
}

/// Unsigned angle between two directions, in `[0, 180]`.
pub(crate) fn separation(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

pub(crate) fn is_collinear(a: f64, b: f64, collinear_deg: f64) -> bool {
    separation(a, b) >= 180.0 - collinear_deg
}

/// Junction type from incident directions (degrees).
pub fn classify_angles(angles: &[f64], collinear_deg: f64) -> JunctionType {
    match angles.len() {
        0 => JunctionType::Isolated,
        1 => JunctionType::Terminal,
        2 => JunctionType::L,
        3 => {
            let pairs = [(0, 1), (0, 2), (1, 2)];
            if pairs.iter().any(|&(i, j)| is_collinear(angles[i], angles[j], collinear_deg)) {
                return JunctionType::T;
            }
            let mut sorted = angles.to_vec();
            sorted.sort_by(f64::total_cmp);
            let largest_gap = (0..3)
                .map(|k| if k == 2 { sorted[0] + 360.0 - sorted[2] } else { sorted[k + 1] - sorted[k] })
                .fold(0.0, f64::max);
            if largest_gap > 180.0 {
                JunctionType::Arrow
            } else {
                JunctionType::Y
            }
        }
        _ => JunctionType::HighDegree,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn square_text() -> &'static str {
        "junction a 0 0\njunction b 10 0\njunction c 10 10\njunction d 0 10\n\
         segment ab a b\nsegment bc b c\nsegment cd c d\nsegment da d a\n"
    }

    /// General-position view of a cube: one Y in the middle, three Arrows and
    /// three L's on the silhouette.
    pub fn cube_text() -> &'static str {
        "# cube, three faces visible\n\
         junction y 0 0\n\
         junction a1 0 -10\njunction a2 9 5\njunction a3 -9 5\n\
         junction l1 9 -5\njunction l2 0 10\njunction l3 -9 -5\n\
         segment s1 y a1\nsegment s2 y a2\nsegment s3 y a3\n\
         segment s4 a1 l1\nsegment s5 l1 a2\nsegment s6 a2 l2\n\
         segment s7 l2 a3\nsegment s8 a3 l3\nsegment s9 l3 a1\n"
    }

    #[test]
    fn parses_square() {
        let d = LineDrawing::parse(square_text()).unwrap();
        assert_eq!(d.junctions().len(), 4);
        assert_eq!(d.segments().len(), 4);
        for j in 0..4 {
            assert_eq!(d.classify(j, 10.0), JunctionType::L);
        }
        let again = LineDrawing::parse(&d.to_text()).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn parses_cube() {
        let d = LineDrawing::parse(cube_text()).unwrap();
        assert_eq!(d.junctions().len(), 7);
        assert_eq!(d.segments().len(), 9);
        let count = |t| (0..7).filter(|&j| d.classify(j, 10.0) == t).count();
        assert_eq!(count(JunctionType::Y), 1);
        assert_eq!(count(JunctionType::Arrow), 3);
        assert_eq!(count(JunctionType::L), 3);
    }

    #[test]
    fn empty_stream_is_rejected() {
        assert_eq!(LineDrawing::parse("# nothing here\n"), Err(DrawingError::NoJunctions));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("junction a 0 0\nsegment s a z\n", 2),
            ("junction a 0 0\njunction a 1 1\n", 2),
            ("junction a 0 0\njunction b 1 1\nsegment s a b\nsegment s b a\n", 4),
            ("junction a 0 0\nsegment s a a\n", 2),
            ("junction a 0 0\njunction b 0 0\n", 2),
            ("junction a 0 x\n", 1),
            ("junktion a 0 0\n", 1),
        ];
        for (text, expected) in cases {
            match LineDrawing::parse(text) {
                Err(DrawingError::Parse { line, .. }) => assert_eq!(line, expected, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_angles(&[0.0, 120.0, 240.0], 10.0), JunctionType::Y);
        assert_eq!(classify_angles(&[0.0, 180.0, 90.0], 10.0), JunctionType::T);
        assert_eq!(classify_angles(&[0.0, 30.0, 60.0], 10.0), JunctionType::Arrow);
        assert_eq!(classify_angles(&[0.0, 175.0, 90.0], 10.0), JunctionType::T);
        assert_eq!(classify_angles(&[0.0, 165.0, 90.0], 10.0), JunctionType::Arrow);
        assert_eq!(classify_angles(&[], 10.0), JunctionType::Isolated);
        assert_eq!(classify_angles(&[5.0], 10.0), JunctionType::Terminal);
        assert_eq!(classify_angles(&[5.0, 185.0], 10.0), JunctionType::L);
        assert_eq!(classify_angles(&[0.0, 90.0, 180.0, 270.0], 10.0), JunctionType::HighDegree);
    }
}
