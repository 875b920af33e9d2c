//! Exact integer arithmetic: a checked 128-bit fast path and an
//! arbitrary-precision fallback behind one small trait, plus a fraction-free
//! (Bareiss) determinant over either.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub(crate) trait ExactInt: Clone + PartialEq + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Division known to leave no remainder.
    fn div_exact(&self, other: &Self) -> Self;
    fn into_big(self) -> BigInt;
}

impl ExactInt for i128 {
    fn from_i64(v: i64) -> Self {
        i128::from(v)
    }
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_exact(&self, other: &Self) -> Self {
        debug_assert_eq!(self % other, 0);
        self / other
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl ExactInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_exact(&self, other: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % other)));
        self / other
    }
    fn into_big(self) -> BigInt {
        self
    }
}

/// Determinant of the row-major `size`×`size` matrix, consumed in place.
/// `None` only when the fast path overflows.
pub(crate) fn bareiss<T: ExactInt>(mut m: Vec<T>, size: usize) -> Option<T> {
    if size == 0 {
        return Some(T::one());
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..size - 1 {
        if m[k * size + k].is_zero() {
            let Some(pivot) = (k + 1..size).find(|&r| !m[r * size + k].is_zero()) else {
                return Some(T::zero());
            };
            for j in 0..size {
                m.swap(k * size + j, pivot * size + j);
            }
            negate = !negate;
        }
        let pivot = m[k * size + k].clone();
        for i in k + 1..size {
            let lead = m[i * size + k].clone();
            for j in k + 1..size {
                let keep = m[i * size + j].mul(&pivot)?;
                let cross = lead.mul(&m[k * size + j])?;
                m[i * size + j] = keep.sub(&cross)?.div_exact(&prev);
            }
        }
        prev = pivot;
    }
    let det = m[size * size - 1].clone();
    if negate {
        det.neg()
    } else {
        Some(det)
    }
}

/// Exact determinant of an integer matrix given by rows.
pub fn determinant(rows: &[Vec<i64>]) -> BigInt {
    let size = rows.len();
    let flat: Vec<i64> = rows.concat();
    assert_eq!(flat.len(), size * size, "matrix must be square");
    match bareiss(flat.iter().map(|&v| i128::from(v)).collect(), size) {
        Some(d) => d.into(),
        None => bareiss(flat.into_iter().map(BigInt::from).collect(), size).expect("bigint never overflows"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(rows: &[Vec<i64>]) -> BigInt {
        let n = rows.len();
        if n == 0 {
            return BigInt::from(1);
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                    .collect();
                let term = BigInt::from(rows[0][j]) * cofactor_det(&minor);
                if j % 2 == 0 { term } else { -term }
            })
            .sum()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&[]), BigInt::from(1));
        assert_eq!(determinant(&[vec![7]]), BigInt::from(7));
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(determinant(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), BigInt::from(6));
        // Singular Laplacian.
        assert_eq!(determinant(&[vec![1, -1], vec![-1, 1]]), BigInt::from(0));
    }

    #[test]
    fn pivoting_matches_cofactor_expansion() {
        let m = vec![vec![0, 2, -1, 3], vec![0, 0, 4, 1], vec![5, -2, 0, 0], vec![1, 1, 1, 0]];
        assert_eq!(determinant(&m), cofactor_det(&m));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = 1i64 << 40;
        let m: Vec<Vec<i64>> = (0..5).map(|i| (0..5).map(|j| if i == j { big } else { (i * 5 + j) as i64 }).collect()).collect();
        assert!(bareiss(m.concat().into_iter().map(i128::from).collect(), 5).is_none());
        assert_eq!(determinant(&m), cofactor_det(&m));
    }

    proptest::proptest! {
        #[test]
        fn agrees_with_cofactor_expansion(entries in proptest::collection::vec(-9i64..10, 25), n in 1usize..6) {
            let rows: Vec<Vec<i64>> = (0..n).map(|i| entries[i * 5..i * 5 + n].to_vec()).collect();
            proptest::prop_assert_eq!(determinant(&rows), cofactor_det(&rows));
        }
    }
}
