//! Exact convex and lattice tests on finite point sets.
//!
//! `contains_origin` and `positive_functional` are Farkas duals of each
//! other. They are computed by two independent exact linear programs and
//! every certificate is checked by substitution before it is returned.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{NashError, Result};
use crate::lp::feasible_point;
use crate::monomial_jacobian::Point;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn check_points(points: &[Point]) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| NashError::Input("point set is empty".into()))?;
    let d = first.len();
    if let Some(bad) = points.iter().find(|p| p.len() != d) {
        return Err(NashError::DimensionMismatch {
            expected: d,
            found: bad.len(),
        });
    }
    Ok(d)
}

/// Outcome of the separation loop.
enum Separation {
    /// Rational `w` with `w·p ≥ 1` on every point.
    Functional(Vec<BigRational>),
    /// A subset whose convex hull already contains the origin.
    Contained(Vec<usize>),
}

/// Searches for a separating functional by constraint generation: the LP is
/// solved on a growing subset of the points until its solution is valid for
/// all of them, or the subset itself is shown to surround the origin.
fn separate(points: &[Point], d: usize) -> Separation {
    let mut active: Vec<usize> = (0..points.len().min(2 * d + 1)).collect();
    loop {
        let Some(w) = functional_on(points, &active, d) else {
            return Separation::Contained(active);
        };
        let mut violated: Vec<(BigRational, usize)> = points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                let v: BigRational = p.iter().zip(&w).map(|(&x, wi)| wi * q(x)).sum();
                (v < BigRational::one()).then_some((v, i))
            })
            .collect();
        if violated.is_empty() {
            return Separation::Functional(w);
        }
        violated.sort();
        active.extend(violated.iter().take(2 * d).map(|(_, i)| *i));
    }
}

/// Convex weights on `subset` (embedded into all points) hitting the origin.
fn origin_lp(points: &[Point], subset: &[usize], d: usize) -> Option<Vec<BigRational>> {
    // Σ λ_i p_i = 0, Σ λ_i = 1, λ ≥ 0
    let mut a: Vec<Vec<BigRational>> = (0..d)
        .map(|k| subset.iter().map(|&i| q(points[i][k])).collect())
        .collect();
    a.push(vec![BigRational::one(); subset.len()]);
    let mut b = vec![BigRational::zero(); d];
    b.push(BigRational::one());
    let local = feasible_point(&a, &b)?;
    let mut lambda = vec![BigRational::zero(); points.len()];
    for (&i, l) in subset.iter().zip(local) {
        lambda[i] = l;
    }
    Some(lambda)
}

/// A convex combination of the points equal to the origin, if one exists.
///
/// The returned weights are non-negative, sum to one, and have been verified.
pub fn origin_certificate(points: &[Point]) -> Result<Option<Vec<BigRational>>> {
    let d = check_points(points)?;
    if let Some(z) = points.iter().position(|p| p.iter().all(|&x| x == 0)) {
        let mut lambda = vec![BigRational::zero(); points.len()];
        lambda[z] = BigRational::one();
        return Ok(Some(lambda));
    }
    let subset = match separate(points, d) {
        Separation::Functional(_) => return Ok(None),
        Separation::Contained(subset) => subset,
    };
    let lambda = origin_lp(points, &subset, d)
        .expect("an infeasible separation LP implies a convex combination");
    assert!(
        verify_convex_combination(points, &lambda),
        "simplex returned an invalid certificate"
    );
    Ok(Some(lambda))
}

pub fn verify_convex_combination(points: &[Point], lambda: &[BigRational]) -> bool {
    if lambda.len() != points.len() || lambda.iter().any(|l| l.is_negative()) {
        return false;
    }
    if lambda.iter().sum::<BigRational>() != BigRational::one() {
        return false;
    }
    let d = points.first().map_or(0, Vec::len);
    (0..d).all(|k| {
        points
            .iter()
            .zip(lambda)
            .map(|(p, l)| l * q(p[k]))
            .sum::<BigRational>()
            .is_zero()
    })
}

/// Whether the origin lies in the convex hull of `points`.
pub fn contains_origin(points: &[Point]) -> Result<bool> {
    Ok(origin_certificate(points)?.is_some())
}

/// An integer covector `w` with `w·p ≥ 1` for every point, or `None` when
/// the origin lies in the convex hull.
pub fn positive_functional(points: &[Point]) -> Result<Option<Vec<BigInt>>> {
    let d = check_points(points)?;
    let Separation::Functional(w) = separate(points, d) else {
        return Ok(None);
    };
    let denom = w.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let w: Vec<BigInt> = w
        .iter()
        .map(|x| (x * BigRational::from_integer(denom.clone())).to_integer())
        .collect();
    assert!(
        verify_functional(points, &w),
        "simplex returned an invalid functional"
    );
    Ok(Some(w))
}

/// Rational `w` with `w·p_i ≥ 1` for the `active` points.
fn functional_on(points: &[Point], active: &[usize], d: usize) -> Option<Vec<BigRational>> {
    let k = active.len();
    // w = u - v, p_i·u - p_i·v - s_i = 1, all of u, v, s ≥ 0
    let a: Vec<Vec<BigRational>> = active
        .iter()
        .enumerate()
        .map(|(row, &i)| {
            let p = &points[i];
            let mut r = Vec::with_capacity(2 * d + k);
            r.extend(p.iter().map(|&x| q(x)));
            r.extend(p.iter().map(|&x| q(-x)));
            r.extend((0..k).map(|j| if j == row { q(-1) } else { q(0) }));
            r
        })
        .collect();
    let b = vec![BigRational::one(); k];
    let sol = feasible_point(&a, &b)?;
    Some((0..d).map(|j| &sol[j] - &sol[d + j]).collect())
}

/// Like [`positive_functional`], narrowed to machine integers.
pub fn positive_functional_i64(points: &[Point]) -> Result<Option<Point>> {
    positive_functional(points)?
        .map(|w| {
            w.iter()
                .map(|x| x.to_i64().ok_or(NashError::Overflow("positive functional")))
                .collect()
        })
        .transpose()
}

pub fn verify_functional(points: &[Point], w: &[BigInt]) -> bool {
    points.iter().all(|p| {
        p.len() == w.len()
            && p.iter().zip(w).map(|(&x, wi)| wi * x).sum::<BigInt>() >= BigInt::one()
    })
}

/// Whether the points generate all of `Z^d` as a group.
///
/// Uses unimodular row reduction (Euclid on each column); the lattice is
/// `Z^d` iff `d` pivots appear and each is `±1`.
pub fn zspan_is_full(points: &[Point]) -> bool {
    let Some(first) = points.first() else {
        return false;
    };
    let d = first.len();
    if points.len() < d || points.iter().any(|p| p.len() != d) {
        return false;
    }
    let mut rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| p.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    for col in 0..d {
        let top = col;
        loop {
            // smallest non-zero |entry| in this column at or below `top`
            let Some(piv) = (top..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by_key(|&r| rows[r][col].abs())
            else {
                return false;
            };
            rows.swap(top, piv);
            let mut done = true;
            for r in top + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = rows[r][col].div_floor(&rows[top][col]);
                let pivot_row = rows[top].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[top][col].abs() != BigInt::one() {
            return false;
        }
    }
    true
}
