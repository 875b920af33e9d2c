//! Occlusion of one drawing by the convex hull of another.

use super::SynthError;
use crate::linedraw::{Junction, LineDrawing};

type Point = (f64, f64);

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Indices of the strict convex hull, counter-clockwise.
pub(crate) fn convex_hull(points: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].0.total_cmp(&points[b].0).then(points[a].1.total_cmp(&points[b].1)));
    if idx.len() < 3 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let order: Box<dyn Iterator<Item = &usize>> = if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
        for &i in order {
            while hull.len() >= start + 2 && cross(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) <= 0.0 {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Point where a segment crosses the hull boundary.
struct Crossing {
    id: String,
    at: Point,
    edge: usize,
    /// Position along the hull edge, 0 at its start and 1 at its end.
    along: f64,
}

/// Hides everything of `back` inside the convex hull of `front`, then draws
/// `front` on top. A back segment that crosses the hull boundary is cut
/// there, its visible part ending on the hull outline, which is split at
/// that point (a T junction). Front ids get `prefix`; new junctions are
/// named `<prefix>x<k>`. Front must draw every hull edge as one segment.
pub fn overlay(back: &LineDrawing, front: &LineDrawing, prefix: &str) -> Result<LineDrawing, SynthError> {
    let fpts: Vec<Point> = front.junctions().iter().map(|j| (j.x, j.y)).collect();
    let hull = convex_hull(&fpts);
    if hull.len() < 3 {
        return Err(SynthError::Degenerate("occluder has no interior"));
    }
    let corners: Vec<Point> = hull.iter().map(|&i| fpts[i]).collect();
    let k = corners.len();
    // Outward normal of hull edge i (from corner i to corner i + 1).
    let normals: Vec<Point> = (0..k)
        .map(|i| {
            let (a, b) = (corners[i], corners[(i + 1) % k]);
            (b.1 - a.1, a.0 - b.0)
        })
        .collect();
    let inside = |p: Point| (0..k).all(|i| normals[i].0 * (p.0 - corners[i].0) + normals[i].1 * (p.1 - corners[i].1) < 0.0);

    let mut crossings: Vec<Crossing> = Vec::new();
    let mut junctions: Vec<Junction> = Vec::new();
    let mut segments: Vec<(String, String, String)> = Vec::new();
    for j in back.junctions() {
        if !inside((j.x, j.y)) {
            junctions.push(j.clone());
        }
    }
    for s in back.segments() {
        let (ja, jb) = (&back.junctions()[s.ends[0]], &back.junctions()[s.ends[1]]);
        let (p0, p1) = ((ja.x, ja.y), (jb.x, jb.y));
        let d = (p1.0 - p0.0, p1.1 - p0.1);
        let (mut t_in, mut t_out) = (0.0f64, 1.0f64);
        let (mut e_in, mut e_out) = (None, None);
        let mut missed = false;
        for i in 0..k {
            let n = normals[i];
            let num = n.0 * (p0.0 - corners[i].0) + n.1 * (p0.1 - corners[i].1);
            let den = n.0 * d.0 + n.1 * d.1;
            if den == 0.0 {
                if num >= 0.0 {
                    missed = true;
                    break;
                }
                continue;
            }
            let t = -num / den;
            if den < 0.0 {
                if t > t_in {
                    t_in = t;
                    e_in = Some(i);
                }
            } else if t < t_out {
                t_out = t;
                e_out = Some(i);
            }
        }
        if missed || t_out - t_in <= 1e-9 {
            segments.push((s.id.clone(), ja.id.clone(), jb.id.clone()));
            continue;
        }
        let mut cross_at = |t: f64, edge: usize| {
            let at = (p0.0 + t * d.0, p0.1 + t * d.1);
            let (a, b) = (corners[edge], corners[(edge + 1) % k]);
            let len2 = (b.0 - a.0).powi(2) + (b.1 - a.1).powi(2);
            let along = ((at.0 - a.0) * (b.0 - a.0) + (at.1 - a.1) * (b.1 - a.1)) / len2;
            let id = format!("{prefix}x{}", crossings.len());
            crossings.push(Crossing { id: id.clone(), at, edge, along });
            id
        };
        let pieces = [(e_in, t_in, true), (e_out, t_out, false)];
        let visible: Vec<(Option<usize>, f64, bool)> = pieces.into_iter().filter(|p| p.0.is_some()).collect();
        for (n, &(edge, t, entering)) in visible.iter().enumerate() {
            let x = cross_at(t, edge.expect("filtered"));
            let id = if visible.len() == 2 { format!("{}~{}", s.id, n + 1) } else { s.id.clone() };
            if entering {
                segments.push((id, ja.id.clone(), x));
            } else {
                segments.push((id, x, jb.id.clone()));
            }
        }
    }
    for c in &crossings {
        junctions.push(Junction { id: c.id.clone(), x: c.at.0, y: c.at.1 });
    }

    let fid = |j: usize| format!("{prefix}{}", front.junctions()[j].id);
    for j in 0..front.junctions().len() {
        let src = &front.junctions()[j];
        junctions.push(Junction { id: fid(j), x: src.x, y: src.y });
    }
    let mut hull_segment = vec![None; k];
    for (si, s) in front.segments().iter().enumerate() {
        let on_hull = (0..k).find(|&i| {
            let (a, b) = (hull[i], hull[(i + 1) % k]);
            s.ends == [a, b] || s.ends == [b, a]
        });
        match on_hull {
            Some(i) => hull_segment[i] = Some(si),
            None => segments.push((format!("{prefix}{}", s.id), fid(s.ends[0]), fid(s.ends[1]))),
        }
    }
    for i in 0..k {
        let si = hull_segment[i].ok_or(SynthError::Degenerate("occluder outline is not drawn"))?;
        let mut on_edge: Vec<&Crossing> = crossings.iter().filter(|c| c.edge == i).collect();
        on_edge.sort_by(|a, b| a.along.total_cmp(&b.along));
        let mut chain = vec![fid(hull[i])];
        chain.extend(on_edge.iter().map(|c| c.id.clone()));
        chain.push(fid(hull[(i + 1) % k]));
        let base = &front.segments()[si].id;
        for (n, pair) in chain.windows(2).enumerate() {
            let id = if chain.len() == 2 { format!("{prefix}{base}") } else { format!("{prefix}{base}~{n}") };
            segments.push((id, pair[0].clone(), pair[1].clone()));
        }
    }

    let mut used = std::collections::HashSet::new();
    for (_, a, b) in &segments {
        used.insert(a.clone());
        used.insert(b.clone());
    }
    junctions.retain(|j| used.contains(&j.id));
    LineDrawing::new(junctions, segments).map_err(SynthError::Drawing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linedraw::{split_image_graph, DrawingOptions, JunctionType};

    fn square(id: &str, x0: f64, y0: f64, side: f64) -> LineDrawing {
        let p = [(x0, y0), (x0 + side, y0), (x0 + side, y0 + side), (x0, y0 + side)];
        LineDrawing::new(
            p.iter().enumerate().map(|(i, &(x, y))| Junction { id: format!("{id}{i}"), x, y }),
            (0..4).map(|i| (format!("{id}s{i}"), format!("{id}{i}"), format!("{id}{}", (i + 1) % 4))),
        )
        .unwrap()
    }

    #[test]
    fn hull_of_square_with_interior_point() {
        let pts = [(0.0, 0.0), (1.0, 0.5), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0), (1.0, 1.0)];
        let hull = convex_hull(&pts);
        assert_eq!(hull, vec![0, 2, 3, 4]);
    }

    #[test]
    fn overlapping_squares_make_t_junctions() {
        let back = square("b", 0.0, 0.0, 10.0);
        let front = square("f", 6.0, 6.0, 10.0);
        let scene = overlay(&back, &front, "o.").unwrap();
        let t_count = (0..scene.junctions().len()).filter(|&j| scene.classify(j, 10.0) == JunctionType::T).count();
        assert_eq!(t_count, 2);
        // The back square's hidden corner is gone.
        assert!(scene.junction_index("b2").is_none());
        let graphs = split_image_graph(&scene, &DrawingOptions::default()).unwrap();
        assert_eq!(graphs.len(), 1);
        assert_eq!(graphs[0].node_count(), 4);
    }

    #[test]
    fn disjoint_overlay_keeps_both() {
        let back = square("b", 0.0, 0.0, 10.0);
        let front = square("f", 20.0, 0.0, 5.0);
        let scene = overlay(&back, &front, "o.").unwrap();
        assert_eq!(scene.segments().len(), 8);
        assert_eq!(split_image_graph(&scene, &DrawingOptions::default()).unwrap().len(), 2);
    }

    #[test]
    fn segment_passing_under_the_occluder() {
        // A long bar crossing the occluder gives two visible pieces.
        let back = LineDrawing::new(
            [Junction { id: "a".into(), x: -5.0, y: 5.0 }, Junction { id: "b".into(), x: 25.0, y: 5.0 }],
            [("bar".to_string(), "a".to_string(), "b".to_string())],
        )
        .unwrap();
        let scene = overlay(&back, &square("f", 5.0, 0.0, 10.0), "o.").unwrap();
        assert!(scene.segment_index("bar~1").is_some());
        assert!(scene.segment_index("bar~2").is_some());
        assert!((scene.total_length() - (20.0 + 40.0)).abs() < 1e-9);
    }
}
