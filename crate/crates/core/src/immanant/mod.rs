//! Second immanantal polynomial (d2-polynomial) and characteristic polynomial
//! of a graph Laplacian, computed exactly over the integers.
//!
//! With `d2(A) = Σ_i a_ii det A(i) − det A`, the d2-polynomial of a Laplacian
//! `L` is written
//!
//! ```text
//! d2(xI − L) = c_0 xⁿ − c_1 xⁿ⁻¹ + c_2 xⁿ⁻² − … + (−1)ⁿ c_n
//! ```
//!
//! and the coefficient vector `(c_0, …, c_n)` is the [`GraphSignature`].
//! For `X ∈ Q_{k,n}` let `L{X}` be the principal block `L[X]` padded with an
//! identity. Then
//!
//! ```text
//! c_k = Σ_{X ∈ Q_{k,n}} ( Σ_i L{X}_ii · det L{X}(i) − det L{X} )
//! ```
//!
//! Removing a padding row from `L{X}` leaves `det L[X]`, and removing a row of
//! `X` leaves `det L[X∖i]`, so every term is a principal minor of `L`. All
//! `2ⁿ` minors are computed once by fraction-free elimination and shared
//! between the d2 and characteristic coefficients.

pub mod oracle;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use thiserror::Error;

use crate::exact::{bareiss, ExactInt};
use crate::graph::{LaplacianMatrix, WeightedGraph};

/// Largest graph the signature functions accept unless told otherwise.
pub const DEFAULT_MAX_NODES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("graph has {size} nodes, limit is {max}")]
    TooLarge { size: usize, max: usize },
    #[error("signatures have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("intermediate value overflowed 128 bits")]
    Overflow,
    #[error("malformed signature text: {0}")]
    Malformed(String),
}

/// Coefficients `(c_0, …, c_n)` of the d2-polynomial in the alternating-sign
/// convention. Ordered lexicographically by coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphSignature {
    coeffs: Vec<BigInt>,
}

impl GraphSignature {
    pub fn from_coefficients<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        assert!(!coeffs.is_empty(), "a signature has at least c_0");
        Self { coeffs }
    }

    /// Node count `n` of the characterized graph.
    pub fn size(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Signature of `graph` with the default size limit.
    pub fn of(graph: &WeightedGraph) -> Result<Self, SignatureError> {
        d2_signature(&graph.laplacian(), DEFAULT_MAX_NODES)
    }
}

impl fmt::Display for GraphSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for GraphSignature {
    type Err = SignatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coeffs = s
            .split_whitespace()
            .map(|tok| tok.parse::<BigInt>().map_err(|_| SignatureError::Malformed(tok.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.is_empty() {
            return Err(SignatureError::Malformed(s.to_string()));
        }
        Ok(Self { coeffs })
    }
}

/// Coefficients of `det(xI − L)` from the leading `1` down to the constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharPolySignature {
    coeffs: Vec<BigInt>,
}

impl CharPolySignature {
    pub fn from_coefficients<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        assert!(!coeffs.is_empty(), "a polynomial has a leading coefficient");
        Self { coeffs }
    }

    pub fn size(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Descending powers: `coefficients()[k]` multiplies `x^(n-k)`.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }
}

impl fmt::Display for CharPolySignature {
    /// Renders as `x^4 - 6x^3 + 9x^2 - 4x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.size();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let power = n - k;
            let magnitude = c.magnitude();
            let negative = c.sign() == num_bigint::Sign::Minus;
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let unit = *magnitude == BigUint::from(1u8);
            if !unit || power == 0 {
                write!(f, "{magnitude}")?;
            }
            match power {
                0 => {}
                1 => f.write_str("x")?,
                p => write!(f, "x^{p}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn check_size(l: &LaplacianMatrix, max_nodes: usize) -> Result<(), SignatureError> {
    if l.size() > max_nodes {
        return Err(SignatureError::TooLarge { size: l.size(), max: max_nodes });
    }
    Ok(())
}

/// Every strictly increasing `k`-subset of `0..n` as a bitmask, in
/// lexicographic order of the index sequences.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<usize> {
    fn rec(start: usize, n: usize, left: usize, mask: usize, out: &mut Vec<usize>) {
        if left == 0 {
            out.push(mask);
            return;
        }
        for i in start..=n - left {
            rec(i + 1, n, left - 1, mask | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

/// `det L[X]` for every subset mask `X` (the empty minor is 1).
fn principal_minors<T: ExactInt>(l: &LaplacianMatrix) -> Option<Vec<T>> {
    let n = l.size();
    let mut minors = Vec::with_capacity(1 << n);
    let mut idx = Vec::with_capacity(n);
    for mask in 0usize..(1 << n) {
        idx.clear();
        idx.extend((0..n).filter(|&i| mask & (1 << i) != 0));
        let sub = idx.iter().flat_map(|&i| idx.iter().map(move |&j| T::from_i64(l.get(i, j)))).collect();
        minors.push(bareiss(sub, idx.len())?);
    }
    Some(minors)
}

struct Coefficients<T> {
    d2: Vec<T>,
    char_poly: Vec<T>,
}

fn coefficients<T: ExactInt>(l: &LaplacianMatrix) -> Option<Coefficients<T>> {
    let n = l.size();
    let minors = principal_minors::<T>(l)?;
    let size_factor = T::from_i64(n as i64 - 1);

    let mut d2 = Vec::with_capacity(n + 1);
    d2.push(size_factor.clone());
    d2.push(size_factor.mul(&T::from_i64(l.trace()))?);
    for k in 2..=n {
        let padding = T::from_i64(n as i64 - k as i64 - 1);
        let total = subsets(n, k).into_iter().try_fold(T::zero(), |acc, mask| {
            let mut term = padding.mul(&minors[mask])?;
            for i in (0..n).filter(|&i| mask & (1 << i) != 0) {
                let diag = T::from_i64(l.get(i, i));
                term = term.add(&diag.mul(&minors[mask & !(1 << i)])?)?;
            }
            acc.add(&term)
        })?;
        d2.push(total);
    }

    let mut char_poly = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let sum = subsets(n, k).into_iter().try_fold(T::zero(), |acc, mask| acc.add(&minors[mask]))?;
        char_poly.push(if k % 2 == 1 { sum.neg()? } else { sum });
    }
    Some(Coefficients { d2, char_poly })
}

fn exact_coefficients(l: &LaplacianMatrix) -> Coefficients<BigInt> {
    match coefficients::<i128>(l) {
        Some(c) => Coefficients {
            d2: c.d2.into_iter().map(ExactInt::into_big).collect(),
            char_poly: c.char_poly.into_iter().map(ExactInt::into_big).collect(),
        },
        None => coefficients::<BigInt>(l).expect("bigint never overflows"),
    }
}

/// d2-polynomial coefficients of `l`.
pub fn d2_signature(l: &LaplacianMatrix, max_nodes: usize) -> Result<GraphSignature, SignatureError> {
    check_size(l, max_nodes)?;
    Ok(GraphSignature { coeffs: exact_coefficients(l).d2 })
}

/// Coefficients of `det(xI − l)`.
pub fn char_signature(l: &LaplacianMatrix, max_nodes: usize) -> Result<CharPolySignature, SignatureError> {
    check_size(l, max_nodes)?;
    Ok(CharPolySignature { coeffs: exact_coefficients(l).char_poly })
}

/// Both signatures from one pass over the principal minors.
pub fn signatures(l: &LaplacianMatrix, max_nodes: usize) -> Result<(GraphSignature, CharPolySignature), SignatureError> {
    check_size(l, max_nodes)?;
    let c = exact_coefficients(l);
    Ok((GraphSignature { coeffs: c.d2 }, CharPolySignature { coeffs: c.char_poly }))
}

/// Sum of squared coefficient differences over `c_1..c_n` (`c_0` depends
/// only on the size and is skipped). Defined only for equal sizes.
pub fn diff(a: &GraphSignature, b: &GraphSignature) -> Result<BigUint, SignatureError> {
    if a.size() != b.size() {
        return Err(SignatureError::SizeMismatch { left: a.size(), right: b.size() });
    }
    let total: BigInt = a.coeffs[1..].iter().zip(&b.coeffs[1..]).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(total.magnitude().clone())
}
