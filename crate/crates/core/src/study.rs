//! Signature collisions among non-isomorphic connected graphs.

use std::collections::BTreeMap;
use std::fmt;

use crate::immanant::{signatures, SignatureError};
use crate::iso::connected_graphs;

/// Largest size the exhaustive study accepts.
pub const STUDY_MAX_NODES: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionReport {
    pub nodes: usize,
    /// Isomorphism classes of connected binary graphs.
    pub classes: usize,
    /// Unordered pairs of distinct classes sharing a d2 signature.
    pub d2_pairs: usize,
    /// Unordered pairs of distinct classes sharing a characteristic polynomial.
    pub char_pairs: usize,
    /// Classes whose d2 signature is shared with another class.
    pub d2_graphs: usize,
    pub char_graphs: usize,
}

impl fmt::Display for CollisionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} classes={} d2_collisions={} char_collisions={} d2_colliding_graphs={} char_colliding_graphs={}",
            self.nodes, self.classes, self.d2_pairs, self.char_pairs, self.d2_graphs, self.char_graphs
        )
    }
}

fn pair_count<K>(groups: &BTreeMap<K, usize>) -> (usize, usize) {
    groups.values().filter(|&&c| c > 1).fold((0, 0), |(pairs, graphs), &c| (pairs + c * (c - 1) / 2, graphs + c))
}

/// Enumerates connected graphs on `n` nodes up to isomorphism and counts
/// how often each polynomial fails to separate them.
pub fn collision_study(n: usize) -> Result<CollisionReport, SignatureError> {
    if n > STUDY_MAX_NODES || n == 0 {
        return Err(SignatureError::TooLarge { size: n, max: STUDY_MAX_NODES });
    }
    let reps = connected_graphs(n);
    let mut d2 = BTreeMap::new();
    let mut cp = BTreeMap::new();
    for g in &reps {
        let (s, c) = signatures(&g.laplacian(), n)?;
        *d2.entry(s).or_insert(0) += 1;
        *cp.entry(c).or_insert(0) += 1;
    }
    let (d2_pairs, d2_graphs) = pair_count(&d2);
    let (char_pairs, char_graphs) = pair_count(&cp);
    Ok(CollisionReport { nodes: n, classes: reps.len(), d2_pairs, char_pairs, d2_graphs, char_graphs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_nodes() {
        let r = collision_study(3).unwrap();
        assert_eq!((r.classes, r.d2_pairs, r.char_pairs), (2, 0, 0));
    }

    #[test]
    fn four_nodes() {
        let r = collision_study(4).unwrap();
        assert_eq!(r.classes, 6);
        assert!(r.d2_pairs <= r.char_pairs);
    }

    #[test]
    fn six_nodes_characteristic_polynomial_collides() {
        let r = collision_study(6).unwrap();
        assert_eq!(r.classes, 112);
        assert_eq!(r.d2_pairs, 0);
        assert_eq!(r.char_pairs, 2);
    }

    #[test]
    fn size_limit() {
        assert!(collision_study(8).is_err());
    }
}
