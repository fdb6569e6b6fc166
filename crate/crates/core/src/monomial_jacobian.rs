//! Closed-form coefficients of the order-`n` Jacobian of a monomial map.
//!
//! For `φ(x) = (x^{a_1}, …, x^{a_s})` every entry of the order-`n` Jacobian
//! factors as `c_{β,α} · x^{Aβ - α}` with a constant `c_{β,α}` that depends
//! only on the generator matrix. This module computes those constants
//! directly, with no series expansion.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NashError, Result};
use crate::multiindex::{enumerate_lambda, multi_binomial_signed, multi_factorial, MultiIndex};

/// A lattice point in `Z^d`.
pub type Point = Vec<i64>;

/// The `d × s` integer matrix whose columns generate the semigroup.
///
/// Columns are kept in input order. Fewer columns than rows is representable
/// so that degenerate inputs can be reported by the algorithms that care.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorMatrix {
    d: usize,
    columns: Vec<Point>,
}

impl GeneratorMatrix {
    pub fn new(d: usize, columns: Vec<Point>) -> Result<Self> {
        if d == 0 {
            return Err(NashError::Input("dimension d must be at least 1".into()));
        }
        if columns.is_empty() {
            return Err(NashError::Input(
                "at least one generator is required".into(),
            ));
        }
        if let Some(bad) = columns.iter().find(|c| c.len() != d) {
            return Err(NashError::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        Ok(GeneratorMatrix { d, columns })
    }

    /// Builds from columns, taking `d` from the first column.
    pub fn from_columns(columns: Vec<Point>) -> Result<Self> {
        let d = columns.first().map_or(0, Vec::len);
        Self::new(d, columns)
    }

    pub fn identity(d: usize) -> Self {
        let columns = (0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect();
        GeneratorMatrix { d, columns }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Point] {
        &self.columns
    }

    /// The `i`-th row `A_i`.
    pub fn row(&self, i: usize) -> Point {
        self.columns.iter().map(|c| c[i]).collect()
    }

    /// `Aγ = Σ γ(j) a_j`.
    pub fn apply(&self, gamma: &MultiIndex) -> Point {
        let mut out = vec![0i64; self.d];
        for (a, &g) in self.columns.iter().zip(gamma.entries()) {
            if g == 0 {
                continue;
            }
            for (o, &ai) in out.iter_mut().zip(a) {
                *o += ai * i64::from(g);
            }
        }
        out
    }

    fn check_indices(&self, gamma: &MultiIndex, alpha: &MultiIndex) -> Result<()> {
        if gamma.len() != self.len() {
            return Err(NashError::DimensionMismatch {
                expected: self.len(),
                found: gamma.len(),
            });
        }
        if alpha.len() != self.d {
            return Err(NashError::DimensionMismatch {
                expected: self.d,
                found: alpha.len(),
            });
        }
        Ok(())
    }
}

/// Falling-factorial product `Π_i Π_{j<α(i)} (A_i·γ - j)`.
pub fn b_coeff(gamma: &MultiIndex, alpha: &MultiIndex, a: &GeneratorMatrix) -> Result<BigInt> {
    a.check_indices(gamma, alpha)?;
    Ok(b_from_image(&a.apply(gamma), alpha))
}

fn b_from_image(image: &[i64], alpha: &MultiIndex) -> BigInt {
    let mut acc = BigInt::one();
    for (&v, &k) in image.iter().zip(alpha.entries()) {
        for j in 0..i64::from(k) {
            acc *= v - j;
        }
    }
    acc
}

/// `c_{β,α} = (1/α!) Σ_{0≠γ≤β} (-1)^{|β-γ|} binom(β,γ) b_{γ,α}`.
pub fn c_coeff(beta: &MultiIndex, alpha: &MultiIndex, a: &GeneratorMatrix) -> Result<BigRational> {
    a.check_indices(beta, alpha)?;
    let sum = alternating_sum(beta, |gamma| b_from_image(&a.apply(gamma), alpha));
    Ok(BigRational::new(sum, multi_factorial(alpha).into()))
}

fn alternating_sum(beta: &MultiIndex, mut b: impl FnMut(&MultiIndex) -> BigInt) -> BigInt {
    let top = beta.degree();
    let mut sum = BigInt::zero();
    for gamma in beta.sub_indices() {
        if gamma.is_zero() {
            continue;
        }
        let term = multi_binomial_signed(beta, &gamma) * b(&gamma);
        if (top - gamma.degree()).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// The constant matrix `(c_{β,α})`, rows `β ∈ Λ_{s,n}`, columns `α ∈ Λ_{d,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffMatrix {
    pub order: u32,
    pub generators: GeneratorMatrix,
    pub rows: Vec<MultiIndex>,
    pub cols: Vec<MultiIndex>,
    pub entries: Vec<Vec<BigRational>>,
}

impl CoeffMatrix {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    /// Entries with column `α` multiplied by `α!`. All integral.
    pub fn scaled(&self) -> Vec<Vec<BigInt>> {
        let factors: Vec<BigInt> = self
            .cols
            .iter()
            .map(|a| multi_factorial(a).into())
            .collect();
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&factors)
                    .map(|(c, f)| {
                        let v = c * BigRational::from_integer(f.clone());
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect()
    }

    /// `Aβ` for row `i`.
    pub fn row_exponent(&self, i: usize) -> Point {
        self.generators.apply(&self.rows[i])
    }

    /// `Aβ - α`, the exponent of the monomial multiplying entry `(i, j)`.
    pub fn exponent(&self, i: usize, j: usize) -> Point {
        let mut e = self.row_exponent(i);
        for (x, &a) in e.iter_mut().zip(self.cols[j].entries()) {
            *x -= i64::from(a);
        }
        e
    }

    /// `σ_n = Σ_{α ∈ Λ_{d,n}} α`.
    pub fn shift(&self) -> Point {
        column_shift(&self.cols, self.generators.dim())
    }

    /// Evaluates entry `(i, j)` as `c_{β,α} x^{Aβ-α}` at a point with
    /// non-zero coordinates.
    pub fn evaluate(&self, i: usize, j: usize, x: &[BigRational]) -> BigRational {
        let c = &self.entries[i][j];
        if c.is_zero() {
            return BigRational::zero();
        }
        let e = self.exponent(i, j);
        e.iter().zip(x).fold(c.clone(), |acc, (&k, xi)| {
            acc * num_traits::pow::Pow::pow(xi, k as i32)
        })
    }
}

pub(crate) fn column_shift(cols: &[MultiIndex], d: usize) -> Point {
    let mut s = vec![0i64; d];
    for a in cols {
        for (x, &e) in s.iter_mut().zip(a.entries()) {
            *x += i64::from(e);
        }
    }
    s
}

/// Builds the full coefficient matrix for `A` at order `n`.
pub fn build_coeff_matrix(a: &GeneratorMatrix, n: u32) -> Result<CoeffMatrix> {
    let rows = enumerate_lambda(a.len(), n)?;
    let cols = enumerate_lambda(a.dim(), n)?;

    // Every γ in the alternating sums is itself a row index, so b_{γ,α}
    // is tabulated once per (γ, α).
    let row_pos: HashMap<&MultiIndex, usize> =
        rows.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let b_table: Vec<Vec<BigInt>> = rows
        .par_iter()
        .map(|gamma| {
            let image = a.apply(gamma);
            cols.iter()
                .map(|alpha| b_from_image(&image, alpha))
                .collect()
        })
        .collect();
    let factorials: Vec<BigInt> = cols.iter().map(|a| multi_factorial(a).into()).collect();

    let entries = rows
        .par_iter()
        .map(|beta| {
            cols.iter()
                .enumerate()
                .map(|(j, alpha)| {
                    if alpha.degree() < beta.degree() {
                        return BigRational::zero();
                    }
                    let sum = alternating_sum(beta, |gamma| b_table[row_pos[gamma]][j].clone());
                    BigRational::new(sum, factorials[j].clone())
                })
                .collect()
        })
        .collect();

    Ok(CoeffMatrix {
        order: n,
        generators: a.clone(),
        rows,
        cols,
        entries,
    })
}
