//! Per-size hash table over signatures. The hash only selects a bucket;
//! membership is decided by exact comparison of coefficient vectors.

use std::collections::HashMap;

use num_bigint::Sign;

use super::StoredGraph;
use crate::immanant::GraphSignature;

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit hash of the node count and every coefficient (sign and digits).
pub fn signature_hash(sig: &GraphSignature) -> u64 {
    let mut h = mix(sig.size() as u64 ^ 0x9e37_79b9_7f4a_7c15);
    for c in sig.coefficients() {
        let (sign, digits) = c.to_u64_digits();
        let tag = match sign {
            Sign::Minus => 1,
            Sign::NoSign => 2,
            Sign::Plus => 3,
        };
        h = mix(h ^ tag);
        for d in digits {
            h = mix(h.wrapping_add(d));
        }
    }
    h
}

/// Entries of one size, sorted by signature, with a hash index.
#[derive(Debug, Clone)]
pub struct SignatureTable {
    entries: Vec<StoredGraph>,
    buckets: HashMap<u64, Vec<usize>>,
}

impl PartialEq for SignatureTable {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for SignatureTable {}

impl SignatureTable {
    /// `entries` must be sorted by signature with no repeats.
    pub(crate) fn from_sorted(entries: Vec<StoredGraph>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].signature < w[1].signature));
        let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            buckets.entry(signature_hash(&e.signature)).or_default().push(i);
        }
        Self { entries, buckets }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[StoredGraph] {
        &self.entries
    }

    pub fn position(&self, sig: &GraphSignature) -> Option<usize> {
        self.buckets.get(&signature_hash(sig))?.iter().copied().find(|&i| self.entries[i].signature == *sig)
    }

    pub fn get(&self, sig: &GraphSignature) -> Option<&StoredGraph> {
        self.position(sig).map(|i| &self.entries[i])
    }

    /// Largest number of entries sharing one hash value.
    pub fn max_bucket(&self) -> usize {
        self.buckets.values().map(Vec::len).max().unwrap_or(0)
    }
}
