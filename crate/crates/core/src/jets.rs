//! Exact truncated Taylor expansions and the order-`n` Jacobian matrix of a
//! polynomial map.
//!
//! A jet is a polynomial in shifted variables `Y = X - x` with every term of
//! total degree above the order dropped. The order-`n` Jacobian of
//! `g = (g_1, …, g_s)` at `x` has one row per `β ∈ Λ_{s,n}` and one column per
//! `α ∈ Λ_{d,n}`; entry `(β, α)` is the coefficient of `Y^α` in the jet of
//! `(g - g(x))^β`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{NashError, Result};
use crate::multiindex::{enumerate_lambda, MultiIndex};

/// A Laurent polynomial with exact rational coefficients.
///
/// Exponents may be negative so that monomial maps with arbitrary integer
/// generators can be expanded; composition requires non-negative exponents
/// in the outer map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: usize,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: BigRational) -> Self {
        Self::monomial(vars, vec![0; vars], c)
    }

    pub fn variable(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        Self::monomial(vars, e, BigRational::one())
    }

    /// `c · X^exponent`.
    pub fn monomial(vars: usize, exponent: Vec<i64>, c: BigRational) -> Self {
        assert_eq!(
            exponent.len(),
            vars,
            "exponent length must equal variable count"
        );
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exponent, c);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, exponent: Vec<i64>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(exponent.clone())
            .or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.accumulate(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.vars, BigRational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        check_len(self.vars, point.len())?;
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &ei) in point.iter().zip(e) {
                term *= rational_pow(xi, ei)?;
            }
            total += term;
        }
        Ok(total)
    }

    /// Substitutes `inner[i]` for the `i`-th variable.
    pub fn compose(&self, inner: &[Polynomial]) -> Result<Polynomial> {
        check_len(self.vars, inner.len())?;
        let vars = inner.first().map_or(0, |p| p.vars);
        if let Some(bad) = inner.iter().find(|p| p.vars != vars) {
            return Err(NashError::DimensionMismatch {
                expected: vars,
                found: bad.vars,
            });
        }
        let mut out = Polynomial::zero(vars);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(vars, c.clone());
            for (p, &k) in inner.iter().zip(e) {
                if k < 0 {
                    return Err(NashError::Input(
                        "cannot compose into a negative power".into(),
                    ));
                }
                term = term.mul(&p.pow(k as u32));
            }
            out = out.add(&term);
        }
        Ok(out)
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(NashError::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn rational_pow(x: &BigRational, e: i64) -> Result<BigRational> {
    if e < 0 && x.is_zero() {
        return Err(NashError::Input("negative power evaluated at zero".into()));
    }
    Ok(num_traits::pow::Pow::pow(x, e as i32))
}

/// Generalized binomial coefficient `e (e-1) ⋯ (e-k+1) / k!` for integer `e`.
fn general_binomial(e: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k as i64 {
        num *= e - j;
        den *= j + 1;
    }
    num / den
}

/// A polynomial in shifted variables truncated above total degree `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jet {
    vars: usize,
    order: u32,
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl Jet {
    pub fn zero(vars: usize, order: u32) -> Self {
        Jet {
            vars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: usize, order: u32) -> Self {
        Self::from_terms(vars, order, [(MultiIndex::zero(vars), BigRational::one())])
    }

    /// Builds a jet from `(exponent, coefficient)` pairs, dropping zero
    /// coefficients and terms of degree above `order`.
    pub fn from_terms(
        vars: usize,
        order: u32,
        terms: impl IntoIterator<Item = (MultiIndex, BigRational)>,
    ) -> Self {
        let mut jet = Jet::zero(vars, order);
        for (e, c) in terms {
            assert_eq!(e.len(), vars, "exponent length must equal variable count");
            jet.accumulate(e, c);
        }
        jet
    }

    fn accumulate(&mut self, e: MultiIndex, c: BigRational) {
        if c.is_zero() || e.degree() > self.order {
            return;
        }
        let entry = self
            .terms
            .entry(e.clone())
            .or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficient(&self, e: &MultiIndex) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), -c.clone());
        }
        out
    }

    /// The jet with its constant term removed.
    pub fn without_constant(&self) -> Jet {
        let mut out = self.clone();
        out.terms.remove(&MultiIndex::zero(self.vars));
        out
    }

    pub fn pow(&self, k: u32) -> Jet {
        let mut acc = Jet::one(self.vars, self.order);
        for _ in 0..k {
            acc = truncate_mul(&acc, self, self.order).expect("same variable count");
        }
        acc
    }

    /// Taylor expansion of `p` around `x` up to total degree `order`.
    pub fn expand(p: &Polynomial, x: &[BigRational], order: u32) -> Result<Jet> {
        check_len(p.vars, x.len())?;
        let vars = p.vars;
        let mut out = Jet::zero(vars, order);
        for (e, c) in &p.terms {
            // per-coordinate univariate expansions of (x_j + Y_j)^{e_j}
            let mut factors: Vec<Vec<(u32, BigRational)>> = Vec::with_capacity(vars);
            for (j, (&ej, xj)) in e.iter().zip(x).enumerate() {
                let mut series = Vec::new();
                for k in 0..=order {
                    let rest = ej - k as i64;
                    if xj.is_zero() {
                        if rest < 0 && ej < 0 {
                            return Err(NashError::Input(format!(
                                "coordinate {j} is zero at a pole of the map"
                            )));
                        }
                        if rest != 0 {
                            continue;
                        }
                    }
                    let coeff = BigRational::from_integer(general_binomial(ej, k));
                    if coeff.is_zero() {
                        continue;
                    }
                    series.push((k, coeff * rational_pow(xj, rest)?));
                }
                factors.push(series);
            }
            let mut partial = vec![(Vec::<u32>::new(), 0u32, c.clone())];
            for series in &factors {
                let mut next = Vec::new();
                for (prefix, deg, coeff) in &partial {
                    for (k, a) in series {
                        if deg + k > order {
                            continue;
                        }
                        let mut idx = prefix.clone();
                        idx.push(*k);
                        next.push((idx, deg + k, coeff * a));
                    }
                }
                partial = next;
            }
            for (idx, _, coeff) in partial {
                out.accumulate(MultiIndex::new(idx), coeff);
            }
        }
        Ok(out)
    }
}

/// Product of two jets, dropping all terms of total degree above `order`.
pub fn truncate_mul(p: &Jet, q: &Jet, order: u32) -> Result<Jet> {
    check_len(p.vars, q.vars)?;
    let mut out = Jet::zero(p.vars, order);
    for (e1, c1) in &p.terms {
        let d1 = e1.degree();
        if d1 > order {
            continue;
        }
        for (e2, c2) in &q.terms {
            if d1 + e2.degree() > order {
                continue;
            }
            out.accumulate(e1.add(e2), c1 * c2);
        }
    }
    Ok(out)
}

/// Dense matrix with rows indexed by `Λ_{s,n}` and columns by `Λ_{d,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetMatrix {
    pub order: u32,
    pub rows: Vec<MultiIndex>,
    pub cols: Vec<MultiIndex>,
    pub entries: Vec<Vec<BigRational>>,
}

impl JetMatrix {
    pub fn entry(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row][col]
    }

    pub fn is_identity(&self) -> bool {
        self.rows.len() == self.cols.len()
            && self.entries.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
            })
    }

    /// `self · rhs`; `self`'s columns must match `rhs`'s rows.
    pub fn matmul(&self, rhs: &JetMatrix) -> Result<JetMatrix> {
        check_len(self.cols.len(), rhs.rows.len())?;
        let entries = self
            .entries
            .iter()
            .map(|row| {
                (0..rhs.cols.len())
                    .map(|j| {
                        row.iter()
                            .zip(&rhs.entries)
                            .filter(|(a, _)| !a.is_zero())
                            .fold(BigRational::zero(), |acc, (a, r)| acc + a * &r[j])
                    })
                    .collect()
            })
            .collect();
        Ok(JetMatrix {
            order: self.order,
            rows: self.rows.clone(),
            cols: rhs.cols.clone(),
            entries,
        })
    }

    /// Largest entry magnitude; handy for diagnostics.
    pub fn max_abs(&self) -> BigRational {
        self.entries
            .iter()
            .flatten()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

/// The order-`n` Jacobian matrix of `g = (g_1, …, g_s)` at `x`.
pub fn jet_jacobian(g: &[Polynomial], x: &[BigRational], n: u32) -> Result<JetMatrix> {
    if g.is_empty() {
        return Err(NashError::Input("map has no components".into()));
    }
    let d = x.len();
    for p in g {
        check_len(d, p.vars)?;
    }
    let rows = enumerate_lambda(g.len(), n)?;
    let cols = enumerate_lambda(d, n)?;

    let shifted = g
        .iter()
        .map(|p| Ok(Jet::expand(p, x, n)?.without_constant()))
        .collect::<Result<Vec<_>>>()?;
    // powers[i][k] = h_i^k
    let powers: Vec<Vec<Jet>> = shifted
        .iter()
        .map(|h| {
            let mut ps = vec![Jet::one(d, n)];
            for k in 1..=n as usize {
                let next = truncate_mul(&ps[k - 1], h, n).expect("same variable count");
                ps.push(next);
            }
            ps
        })
        .collect();

    let entries = rows
        .par_iter()
        .map(|beta| {
            let mut jet = Jet::one(d, n);
            for (i, &b) in beta.entries().iter().enumerate() {
                if b > 0 {
                    jet = truncate_mul(&jet, &powers[i][b as usize], n).expect("same vars");
                }
            }
            cols.iter().map(|alpha| jet.coefficient(alpha)).collect()
        })
        .collect();
    Ok(JetMatrix {
        order: n,
        rows,
        cols,
        entries,
    })
}

/// Checks the chain rule `D(ψ∘φ)_x = D(ψ)_{φ(x)} · D(φ)_x` exactly.
pub fn compose_check(
    psi: &[Polynomial],
    phi: &[Polynomial],
    x: &[BigRational],
    n: u32,
) -> Result<bool> {
    let y = phi.iter().map(|p| p.eval(x)).collect::<Result<Vec<_>>>()?;
    let composed = psi
        .iter()
        .map(|p| p.compose(phi))
        .collect::<Result<Vec<_>>>()?;
    let lhs = jet_jacobian(&composed, x, n)?;
    let rhs = jet_jacobian(psi, &y, n)?.matmul(&jet_jacobian(phi, x, n)?)?;
    Ok(lhs == rhs)
}

/// The monomial map `x ↦ (x^{a_1}, …, x^{a_s})` as polynomials.
pub fn monomial_map(columns: &[Vec<i64>], d: usize) -> Vec<Polynomial> {
    columns
        .iter()
        .map(|a| Polynomial::monomial(d, a.clone(), BigRational::one()))
        .collect()
}
