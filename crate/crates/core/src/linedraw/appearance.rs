//! Edge appearances: a segment is labelled by the junction type at each end
//! and by how many sibling segments lie to its left and right there.
//!
//! The catalogue enumerates every endpoint descriptor (L with one sibling;
//! Y or Arrow with two), forms ordered pairs, identifies each pair with its
//! reversal (reversing a segment swaps its ends and mirrors left/right at
//! both), keeps the lexicographically smaller representative, sorts, and
//! numbers the result from 1.

use std::sync::OnceLock;

use super::{DrawingError, DrawingOptions, JunctionType, LineDrawing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    L,
    Y,
    Arrow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndpointDescriptor {
    pub kind: VertexKind,
    pub left: u8,
    pub right: u8,
}

impl EndpointDescriptor {
    pub fn new(kind: VertexKind, left: u8, right: u8) -> Self {
        Self { kind, left, right }
    }

    fn mirrored(self) -> Self {
        Self { left: self.right, right: self.left, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeAppearance {
    /// Descriptor at the segment's first junction.
    pub start: EndpointDescriptor,
    /// Descriptor at the segment's second junction.
    pub end: EndpointDescriptor,
    pub label: u32,
}

type Pair = (EndpointDescriptor, EndpointDescriptor);

fn canonical_pair(start: EndpointDescriptor, end: EndpointDescriptor) -> Pair {
    (start, end).min((end.mirrored(), start.mirrored()))
}

/// Canonical endpoint pairs; the label of `catalogue()[i]` is `i + 1`.
pub fn catalogue() -> &'static [Pair] {
    static CATALOGUE: OnceLock<Vec<Pair>> = OnceLock::new();
    CATALOGUE.get_or_init(|| {
        let mut descriptors = vec![EndpointDescriptor::new(VertexKind::L, 1, 0), EndpointDescriptor::new(VertexKind::L, 0, 1)];
        for kind in [VertexKind::Y, VertexKind::Arrow] {
            for (left, right) in [(2, 0), (1, 1), (0, 2)] {
                descriptors.push(EndpointDescriptor::new(kind, left, right));
            }
        }
        let mut pairs: Vec<Pair> =
            descriptors.iter().flat_map(|&a| descriptors.iter().map(move |&b| canonical_pair(a, b))).collect();
        pairs.sort();
        pairs.dedup();
        pairs
    })
}

/// Weight given to segments that touch a junction outside the catalogue.
pub const UNLABELLED_WEIGHT: u32 = 37;

pub fn canonical_label(start: EndpointDescriptor, end: EndpointDescriptor) -> Option<u32> {
    let key = canonical_pair(start, end);
    catalogue().binary_search(&key).ok().map(|i| i as u32 + 1)
}

/// Sibling `s` is left of the oriented segment `v` if it turns
/// counter-clockwise from it; a sibling pointing exactly backwards counts as
/// left and one pointing exactly forwards as right, so reversing `v` always
/// swaps the two sides.
fn is_left(v: (f64, f64), s: (f64, f64)) -> bool {
    let cross = v.0 * s.1 - v.1 * s.0;
    if cross != 0.0 {
        cross > 0.0
    } else {
        v.0 * s.0 + v.1 * s.1 < 0.0
    }
}

fn descriptor(
    d: &LineDrawing,
    seg: usize,
    at: usize,
    orientation: (f64, f64),
    opts: &DrawingOptions,
) -> Result<EndpointDescriptor, DrawingError> {
    let kind = match d.classify(at, opts.collinear_deg) {
        JunctionType::L => VertexKind::L,
        JunctionType::Y => VertexKind::Y,
        JunctionType::Arrow => VertexKind::Arrow,
        other => {
            return Err(DrawingError::NoAppearance {
                segment: d.segments()[seg].id.clone(),
                junction: d.junctions()[at].id.clone(),
                kind: other,
            })
        }
    };
    let (mut left, mut right) = (0, 0);
    for &sib in d.incident(at).iter().filter(|&&s| s != seg) {
        if is_left(orientation, d.direction(sib, at)) {
            left += 1;
        } else {
            right += 1;
        }
    }
    Ok(EndpointDescriptor { kind, left, right })
}

/// Appearance of segment `seg`, oriented from its first to its second junction.
pub fn edge_appearance(d: &LineDrawing, seg: usize, opts: &DrawingOptions) -> Result<EdgeAppearance, DrawingError> {
    let [a, b] = d.segments()[seg].ends;
    let v = d.direction(seg, a);
    let start = descriptor(d, seg, a, v, opts)?;
    let end = descriptor(d, seg, b, v, opts)?;
    let label = canonical_label(start, end).expect("descriptors of L/Y/Arrow junctions are catalogued");
    Ok(EdgeAppearance { start, end, label })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linedraw::tests::cube_text;
    use crate::linedraw::Junction;

    fn drawing(points: &[(&str, f64, f64)], segs: &[(&str, &str, &str)]) -> LineDrawing {
        LineDrawing::new(
            points.iter().map(|&(id, x, y)| Junction { id: id.into(), x, y }),
            segs.iter().map(|&(id, a, b)| (id.into(), a.into(), b.into())),
        )
        .unwrap()
    }

    #[test]
    fn catalogue_shape() {
        let cat = catalogue();
        // 64 ordered pairs of 8 descriptors; 8 are their own reversal.
        assert_eq!(cat.len(), 36);
        assert_eq!(UNLABELLED_WEIGHT as usize, cat.len() + 1);
        assert!(cat.windows(2).all(|w| w[0] < w[1]));
        for &(a, b) in cat {
            assert_eq!(canonical_pair(a, b), (a, b));
        }
    }

    #[test]
    fn every_descriptor_pair_has_one_label() {
        let cat = catalogue();
        let descriptors: Vec<EndpointDescriptor> = cat.iter().flat_map(|&(a, b)| [a, b]).collect();
        for &a in &descriptors {
            for &b in &descriptors {
                let label = canonical_label(a, b).unwrap();
                assert!((1..=36).contains(&label));
                assert_eq!(label, canonical_label(b.mirrored(), a.mirrored()).unwrap());
            }
        }
    }

    #[test]
    fn l_l_segment_with_siblings_on_the_left() {
        // a→b along +x; both siblings turn up (left of the orientation).
        let d = drawing(
            &[("a", 0.0, 0.0), ("b", 10.0, 0.0), ("c", 10.0, 10.0), ("e", 0.0, 10.0)],
            &[("ab", "a", "b"), ("bc", "b", "c"), ("ae", "a", "e")],
        );
        let app = edge_appearance(&d, 0, &DrawingOptions::default()).unwrap();
        let l_left = EndpointDescriptor::new(VertexKind::L, 1, 0);
        assert_eq!((app.start, app.end), (l_left, l_left));
        let key = canonical_pair(l_left, l_left);
        let expected = catalogue().iter().position(|&p| p == key).unwrap() as u32 + 1;
        assert_eq!(app.label, expected);
        assert_eq!(app.label, 1);
    }

    #[test]
    fn arrow_arrow_segment() {
        // Shaft a→b: at a the two barbs straddle it; at b both barbs fall to the left.
        let d = drawing(
            &[
                ("a", 0.0, 0.0),
                ("b", 10.0, 0.0),
                ("p", 4.0, 3.0),
                ("q", 4.0, -3.0),
                ("r", 16.0, 6.0),
                ("s", 8.0, 4.0),
            ],
            &[("ab", "a", "b"), ("ap", "a", "p"), ("aq", "a", "q"), ("br", "b", "r"), ("bs", "b", "s")],
        );
        let opts = DrawingOptions::default();
        assert_eq!(d.classify(0, 10.0), JunctionType::Arrow);
        assert_eq!(d.classify(1, 10.0), JunctionType::Arrow);
        let app = edge_appearance(&d, 0, &opts).unwrap();
        assert_eq!(app.start, EndpointDescriptor::new(VertexKind::Arrow, 1, 1));
        assert_eq!(app.end, EndpointDescriptor::new(VertexKind::Arrow, 2, 0));
        assert_eq!(Some(app.label), canonical_label(app.start, app.end));
    }

    #[test]
    fn reversal_keeps_label() {
        let d = LineDrawing::parse(cube_text()).unwrap();
        let reversed = LineDrawing::parse(
            &d.to_text()
                .lines()
                .map(|l| {
                    let t: Vec<&str> = l.split_whitespace().collect();
                    if t[0] == "segment" { format!("segment {} {} {}", t[1], t[3], t[2]) } else { l.to_string() }
                })
                .collect::<Vec<_>>()
                .join("\n"),
        )
        .unwrap();
        let opts = DrawingOptions::default();
        for s in 0..d.segments().len() {
            let fwd = edge_appearance(&d, s, &opts).unwrap();
            let back = edge_appearance(&reversed, s, &opts).unwrap();
            assert_eq!(fwd.label, back.label);
            assert_eq!(back.start, fwd.end.mirrored());
        }
    }

    #[test]
    fn mirror_image_can_change_labels() {
        let d = LineDrawing::parse(cube_text()).unwrap();
        let mirrored = LineDrawing::new(
            d.junctions().iter().map(|j| Junction { id: j.id.clone(), x: -j.x, y: j.y }),
            d.segments().iter().map(|s| (s.id.clone(), d.junctions()[s.ends[0]].id.clone(), d.junctions()[s.ends[1]].id.clone())),
        )
        .unwrap();
        let opts = DrawingOptions::default();
        let differs = (0..9).any(|s| {
            let a = edge_appearance(&d, s, &opts).unwrap();
            let b = edge_appearance(&mirrored, s, &opts).unwrap();
            (a.start, a.end) != (b.start, b.end)
        });
        assert!(differs);
    }

    #[test]
    fn terminal_endpoint_has_no_appearance() {
        let d = drawing(&[("a", 0.0, 0.0), ("b", 1.0, 0.0)], &[("ab", "a", "b")]);
        assert!(matches!(
            edge_appearance(&d, 0, &DrawingOptions::default()),
            Err(DrawingError::NoAppearance { kind: JunctionType::Terminal, .. })
        ));
    }
}
