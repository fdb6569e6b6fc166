//! Affine charts of the blowup and the semigroups they generate.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{NashError, Result};
use crate::lattice_geometry::{contains_origin, positive_functional_i64, zspan_is_full};
use crate::minors::ExponentSet;
use crate::monomial_jacobian::{GeneratorMatrix, Point};

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// One affine chart, centered at an element of the exponent set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub center: Point,
    /// `A ∪ {m - center : m ∈ S, m ≠ center}`, deduplicated, zero removed,
    /// lex-sorted.
    pub generators: Vec<Point>,
    pub essential: bool,
    /// Integer covector strictly positive on the generators (essential only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functional: Option<Point>,
    /// Lex-sorted minimal generating set (essential only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_generators: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smooth: Option<bool>,
    /// Lattice span check of the generators (essential only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_span: Option<bool>,
}

/// Generator set of the chart centered at `center`.
pub fn chart_generators(
    a: &GeneratorMatrix,
    s: &ExponentSet,
    center: &[i64],
) -> Result<Vec<Point>> {
    if !s.contains(center) {
        return Err(NashError::Input(format!(
            "chart center {center:?} is not in the exponent set"
        )));
    }
    let mut gens: BTreeSet<Point> = a.columns().iter().cloned().collect();
    for m in &s.elements {
        if m.as_slice() != center {
            gens.insert(sub(m, center));
        }
    }
    gens.retain(|g| g.iter().any(|&x| x != 0));
    Ok(gens.into_iter().collect())
}

/// Writes `target` as a non-negative integer combination of `gens`, given a
/// functional with `w·g ≥ 1` on every generator. Returns the coefficient
/// vector, or `None` if `target` is not in the semigroup.
pub fn decompose(target: &[i64], gens: &[Point], w: &[i64]) -> Result<Option<Vec<u64>>> {
    let weights: Vec<i64> = gens.iter().map(|g| dot(w, g)).collect();
    if weights.iter().any(|&x| x < 1) {
        return Err(NashError::NotEssential);
    }
    // heaviest generators first
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by(|&i, &j| weights[j].cmp(&weights[i]).then(gens[i].cmp(&gens[j])));

    struct Search<'a> {
        gens: &'a [Point],
        order: &'a [usize],
        w: &'a [i64],
        dead: HashSet<Point>,
        path: Vec<usize>,
    }

    impl Search<'_> {
        fn go(&mut self, residual: Point) -> bool {
            if residual.iter().all(|&x| x == 0) {
                return true;
            }
            if dot(self.w, &residual) < 1 || self.dead.contains(&residual) {
                return false;
            }
            for k in 0..self.order.len() {
                let i = self.order[k];
                let next = sub(&residual, &self.gens[i]);
                self.path.push(i);
                if self.go(next) {
                    return true;
                }
                self.path.pop();
            }
            self.dead.insert(residual);
            false
        }
    }

    let mut search = Search {
        gens,
        order: &order,
        w,
        dead: HashSet::new(),
        path: Vec::new(),
    };
    if !search.go(target.to_vec()) {
        return Ok(None);
    }
    let mut coeffs = vec![0u64; gens.len()];
    for i in search.path {
        coeffs[i] += 1;
    }
    Ok(Some(coeffs))
}

/// Semigroup membership `target ∈ N(gens)`.
pub fn member(target: &[i64], gens: &[Point], w: &[i64]) -> Result<bool> {
    Ok(decompose(target, gens, w)?.is_some())
}

/// Minimal generating set of a pointed semigroup together with, for every
/// discarded generator, its coefficients over the returned set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalGenerators {
    pub generators: Vec<Point>,
    pub removed: Vec<(Point, Vec<u64>)>,
}

/// The unique minimal generating set of `N(gens)`.
///
/// `gens` must admit a strictly positive functional; the result is the set
/// of irreducible elements and does not depend on input order.
pub fn minimal_generators(gens: &[Point]) -> Result<MinimalGenerators> {
    let unique: Vec<Point> = gens
        .iter()
        .filter(|g| g.iter().any(|&x| x != 0))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if unique.is_empty() {
        return Ok(MinimalGenerators {
            generators: Vec::new(),
            removed: Vec::new(),
        });
    }
    let w = positive_functional_i64(&unique)?.ok_or(NashError::NotEssential)?;
    minimal_generators_with(&unique, &w)
}

fn minimal_generators_with(unique: &[Point], w: &[i64]) -> Result<MinimalGenerators> {
    let mut candidates: Vec<Point> = unique.to_vec();
    candidates.sort_by(|a, b| dot(w, b).cmp(&dot(w, a)).then(a.cmp(b)));
    let mut keep: BTreeSet<Point> = candidates.iter().cloned().collect();
    let mut removed = Vec::new();
    for g in &candidates {
        keep.remove(g);
        let rest: Vec<Point> = keep.iter().cloned().collect();
        if !rest.is_empty() && member(g, &rest, w)? {
            removed.push(g.clone());
        } else {
            keep.insert(g.clone());
        }
    }
    let generators: Vec<Point> = keep.into_iter().collect();
    let mut removed = removed
        .into_iter()
        .map(|g| {
            let coeffs = decompose(&g, &generators, w)?
                .expect("removed generator lies in the span of the kept ones");
            Ok((g, coeffs))
        })
        .collect::<Result<Vec<_>>>()?;
    removed.sort_unstable_by(|a: &(Point, Vec<u64>), b| a.0.cmp(&b.0));
    Ok(MinimalGenerators {
        generators,
        removed,
    })
}

/// Builds and classifies the chart centered at `center`.
pub fn analyze_chart(a: &GeneratorMatrix, s: &ExponentSet, center: &[i64]) -> Result<Chart> {
    let generators = chart_generators(a, s, center)?;
    let mut chart = Chart {
        center: center.to_vec(),
        generators,
        essential: false,
        functional: None,
        minimal_generators: None,
        smooth: None,
        full_span: None,
    };
    if contains_origin(&chart.generators)? {
        return Ok(chart);
    }
    let w = positive_functional_i64(&chart.generators)?.ok_or(NashError::NotEssential)?;
    let min = minimal_generators_with(&chart.generators, &w)?;
    chart.essential = true;
    chart.smooth = Some(min.generators.len() == a.dim());
    chart.full_span = Some(zspan_is_full(&chart.generators));
    chart.functional = Some(w);
    chart.minimal_generators = Some(min.generators);
    Ok(chart)
}
