//! Multi-indices and the graded index sets `{γ ∈ N^t : 1 ≤ |γ| ≤ n}`.
//!
//! Within a fixed degree, multi-indices are ordered so that `(1,0)` precedes
//! `(0,1)` and `(2,0)` precedes `(1,1)`: lexicographically *larger* vectors
//! come first. This matches the monomial basis `y_1 < y_2 < y_1^2 < y_1 y_2 <
//! y_2^2` and fixes the row and column order of every Jacobian matrix.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{NashError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    /// The `i`-th unit vector of length `len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Coordinate-wise `self ≤ other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Coordinate-wise difference; `None` unless `other ≤ self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.le(self) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Iterates over every `γ` with `0 ≤ γ ≤ self` coordinate-wise, in
    /// odometer order starting from zero.
    pub fn sub_indices(&self) -> SubIndices<'_> {
        SubIndices {
            bound: self,
            current: Some(vec![0; self.len()]),
        }
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

pub struct SubIndices<'a> {
    bound: &'a MultiIndex,
    current: Option<Vec<u32>>,
}

impl Iterator for SubIndices<'_> {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut i = 0;
        loop {
            if i == next.len() {
                self.current = None;
                break;
            }
            if next[i] < self.bound.0[i] {
                next[i] += 1;
                self.current = Some(next);
                break;
            }
            next[i] = 0;
            i += 1;
        }
        Some(MultiIndex(out))
    }
}

/// All multi-indices of length `len` and total degree exactly `degree`, in
/// the crate's graded order (lexicographically descending).
pub fn of_degree(len: usize, degree: u32) -> Vec<MultiIndex> {
    fn fill(prefix: &mut Vec<u32>, len: usize, left: u32, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == len {
            prefix.push(left);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            fill(prefix, len, left - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if len > 0 {
        fill(&mut Vec::with_capacity(len), len, degree, &mut out);
    }
    out
}

/// Enumerates `{γ ∈ N^t : 1 ≤ |γ| ≤ n}` in increasing graded order.
pub fn enumerate_lambda(t: usize, n: u32) -> Result<Vec<MultiIndex>> {
    if t == 0 {
        return Err(NashError::Input("index length t must be at least 1".into()));
    }
    if n == 0 {
        return Err(NashError::Input("order n must be at least 1".into()));
    }
    Ok((1..=n).flat_map(|k| of_degree(t, k)).collect())
}

/// `C(n + t, t) - 1`, the size of the graded index set.
pub fn lambda_len(t: usize, n: u32) -> BigUint {
    binomial(n as u64 + t as u64, t as u64) - BigUint::one()
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn factorial(k: u32) -> BigUint {
    (1..=k as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// `α! = α(1)!·…·α(t)!`.
pub fn multi_factorial(alpha: &MultiIndex) -> BigUint {
    alpha
        .0
        .iter()
        .fold(BigUint::one(), |acc, &e| acc * factorial(e))
}

/// `binom(β, γ) = Π binom(β(i), γ(i))`; zero unless `γ ≤ β`.
pub fn multi_binomial(beta: &MultiIndex, gamma: &MultiIndex) -> Result<BigUint> {
    if beta.len() != gamma.len() {
        return Err(NashError::DimensionMismatch {
            expected: beta.len(),
            found: gamma.len(),
        });
    }
    Ok(beta
        .0
        .iter()
        .zip(&gamma.0)
        .fold(BigUint::one(), |acc, (&b, &g)| {
            acc * binomial(b as u64, g as u64)
        }))
}

/// Signed variant used by alternating sums.
pub(crate) fn multi_binomial_signed(beta: &MultiIndex, gamma: &MultiIndex) -> BigInt {
    BigInt::from(multi_binomial(beta, gamma).expect("lengths checked by caller"))
}
