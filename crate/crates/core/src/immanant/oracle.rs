//! Definitional d2-polynomial, independent of the minor-based formula.
//!
//! The second immanant weights each permutation by the character of the
//! partition `(2, 1ⁿ⁻²)`, `χ(σ) = sgn(σ)·(fix(σ) − 1)`:
//!
//! ```text
//! d2(M) = Σ_σ sgn(σ) (fix(σ) − 1) Π_i M_{i,σ(i)}
//! ```
//!
//! `d2(xI − L)` is evaluated at `x = 0..=n` by brute force over all `n!`
//! permutations and the coefficients are recovered by exact Newton
//! interpolation. Factorial cost, so sizes are capped at [`ORACLE_MAX_NODES`].

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{GraphSignature, SignatureError};
use crate::graph::LaplacianMatrix;

pub const ORACLE_MAX_NODES: usize = 8;

/// Visits every permutation of `0..n` (Heap's algorithm) with its sign.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize], i32)) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut sign = 1;
    visit(&perm, sign);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            let j = if i % 2 == 0 { 0 } else { counters[i] };
            perm.swap(j, i);
            sign = -sign;
            visit(&perm, sign);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

/// `d2(xI − L)` at each `x` in `points`.
fn evaluate(l: &LaplacianMatrix, points: &[i128]) -> Result<Vec<i128>, SignatureError> {
    let n = l.size();
    let mut values = vec![0i128; points.len()];
    let mut overflow = false;
    for_each_permutation(n, |perm, sign| {
        if overflow {
            return;
        }
        let fixed: Vec<usize> = (0..n).filter(|&i| perm[i] == i).collect();
        let weight = i128::from(sign) * (fixed.len() as i128 - 1);
        if weight == 0 {
            return;
        }
        // Off-diagonal factors do not depend on x.
        let mut constant = weight;
        for i in (0..n).filter(|&i| perm[i] != i) {
            match constant.checked_mul(-i128::from(l.get(i, perm[i]))) {
                Some(0) => return,
                Some(c) => constant = c,
                None => {
                    overflow = true;
                    return;
                }
            }
        }
        for (value, &x) in values.iter_mut().zip(points) {
            let term = fixed.iter().try_fold(constant, |acc, &i| acc.checked_mul(x - i128::from(l.get(i, i))));
            match term.and_then(|t| value.checked_add(t)) {
                Some(v) => *value = v,
                None => overflow = true,
            }
        }
    });
    if overflow {
        return Err(SignatureError::Overflow);
    }
    Ok(values)
}

/// Ascending-power coefficients of the degree-`≤ n` polynomial through
/// `(k, values[k])` for `k = 0..=n`.
fn interpolate(values: &[i128]) -> Vec<BigInt> {
    let n = values.len() - 1;
    // Forward differences Δ^k p(0).
    let mut diffs: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
    let mut leading = Vec::with_capacity(n + 1);
    for k in 0..=n {
        leading.push(diffs[0].clone());
        for j in 0..n - k {
            diffs[j] = &diffs[j + 1] - &diffs[j];
        }
    }
    // p(x) = Σ_k Δ^k p(0) · x(x−1)…(x−k+1) / k!
    let mut coeffs = vec![BigInt::zero(); n + 1];
    let mut falling = vec![BigInt::one()];
    let mut factorial = BigInt::one();
    for (k, delta) in leading.iter().enumerate() {
        if k > 0 {
            factorial *= k;
            let shift = BigInt::from(k - 1);
            let mut next = vec![BigInt::zero(); falling.len() + 1];
            for (p, c) in falling.iter().enumerate() {
                next[p + 1] += c;
                next[p] -= c * &shift;
            }
            falling = next;
        }
        let scale = delta / &factorial;
        debug_assert!((delta % &factorial).is_zero(), "integer polynomial");
        for (p, c) in falling.iter().enumerate() {
            coeffs[p] += c * &scale;
        }
    }
    coeffs
}

/// Brute-force d2 signature for `n ≤ ORACLE_MAX_NODES`.
pub fn d2_oracle(l: &LaplacianMatrix) -> Result<GraphSignature, SignatureError> {
    let n = l.size();
    if n > ORACLE_MAX_NODES {
        return Err(SignatureError::TooLarge { size: n, max: ORACLE_MAX_NODES });
    }
    let points: Vec<i128> = (0..=n as i128).collect();
    let ascending = interpolate(&evaluate(l, &points)?);
    // c_k multiplies (−1)^k x^(n−k).
    let coeffs = (0..=n).map(|k| {
        let c = ascending[n - k].clone();
        if k % 2 == 1 { -c } else { c }
    });
    Ok(GraphSignature::from_coefficients(coeffs))
}
