//! Enumeration of the non-vanishing maximal minors of the coefficient matrix
//! and the set of their exponents.
//!
//! A row subset `J` of size `D` contributes the exponent
//! `m̂_J = Aβ_1 + ⋯ + Aβ_D - σ_n` whenever `det(L_J^c) ≠ 0`. Two exact
//! strategies are provided: a naive scan of every subset with a
//! fraction-free determinant, and a depth-first search over linearly
//! independent row sets that never visits a subset containing a dependent
//! prefix.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NashError, Result};
use crate::monomial_jacobian::{CoeffMatrix, Point};

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det_exact(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    assert!(matrix.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return BigInt::from(1);
    }
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Naive,
    #[default]
    Pruned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: SearchMode,
    /// Maximum number of search nodes (subsets in naive mode, row
    /// insertions in pruned mode).
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::Pruned,
            node_budget: Some(50_000_000),
            time_budget: Some(Duration::from_secs(600)),
        }
    }
}

/// Counters describing one enumeration. Deterministic for a fixed input and
/// mode regardless of thread count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchStats {
    /// Subsets examined (naive) or candidate rows tried (pruned).
    pub nodes: u64,
    /// Branches cut: dependent rows skipped plus counting cut-offs.
    pub pruned: u64,
    /// Row subsets with non-zero determinant.
    pub nonzero_minors: u64,
}

/// The deduplicated exponents of the non-zero maximal minors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentSet {
    pub order: u32,
    /// `σ_n`; adding it to every element gives the raw exponents `m_J`.
    pub shift: Point,
    /// Lex-sorted, pairwise distinct.
    pub elements: Vec<Point>,
    /// For each element, the lexicographically first row subset realizing it.
    pub witnesses: Vec<Vec<usize>>,
}

impl ExponentSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        self.elements
            .binary_search_by(|e| e.as_slice().cmp(m))
            .is_ok()
    }

    /// Elements in raw form `m_J = m̂_J + σ_n`.
    pub fn raw_elements(&self) -> Vec<Point> {
        self.elements.iter().map(|e| add(e, &self.shift)).collect()
    }
}

fn add(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

type Found = BTreeMap<Point, Vec<usize>>;

fn record(found: &mut Found, m: Point, subset: &[usize]) {
    match found.get_mut(&m) {
        Some(w) if w.as_slice() <= subset => {}
        Some(w) => *w = subset.to_vec(),
        None => {
            found.insert(m, subset.to_vec());
        }
    }
}

fn merge(mut a: Found, b: Found) -> Found {
    for (m, w) in b {
        record(&mut a, m, &w);
    }
    a
}

struct Budget {
    nodes: AtomicU64,
    limit: Option<u64>,
    deadline: Option<Instant>,
    time_budget: Option<Duration>,
    tripped: AtomicBool,
}

impl Budget {
    fn new(config: &SearchConfig) -> Self {
        Budget {
            nodes: AtomicU64::new(0),
            limit: config.node_budget,
            deadline: config.time_budget.map(|t| Instant::now() + t),
            time_budget: config.time_budget,
            tripped: AtomicBool::new(false),
        }
    }

    /// Counts one node; returns false once the budget is exhausted.
    fn tick(&self) -> bool {
        if self.tripped.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.limit.is_some_and(|l| n > l);
        let over_time = n.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() > d);
        if over_nodes || over_time {
            self.tripped.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn error(&self) -> NashError {
        let nodes = self.nodes.load(Ordering::Relaxed);
        let limit = match (self.limit, self.time_budget) {
            (Some(l), _) if nodes > l => format!("node limit {l}"),
            (_, Some(t)) => format!("time limit {:?}", t),
            _ => "limit".to_string(),
        };
        NashError::BudgetExceeded { nodes, limit }
    }
}

struct Context<'a> {
    rows: &'a [Vec<BigInt>],
    row_exponents: &'a [Point],
    shift: &'a [i64],
    d: usize,
    budget: &'a Budget,
}

impl Context<'_> {
    fn exponent_of(&self, subset: &[usize]) -> Point {
        let mut m: Point = self.shift.iter().map(|s| -s).collect();
        for &i in subset {
            for (x, y) in m.iter_mut().zip(&self.row_exponents[i]) {
                *x += y;
            }
        }
        m
    }
}

/// Collects `S = { m̂_J : |J| = D, det(L_J^c) ≠ 0 }`.
pub fn nonzero_minor_exponents(
    matrix: &CoeffMatrix,
    config: &SearchConfig,
) -> Result<(ExponentSet, SearchStats)> {
    let m = matrix.num_rows();
    let d = matrix.num_cols();
    if m < d {
        return Err(NashError::TooFewRows { rows: m, cols: d });
    }
    let rows = matrix.scaled();
    let row_exponents: Vec<Point> = (0..m).map(|i| matrix.row_exponent(i)).collect();
    let shift = matrix.shift();
    let budget = Budget::new(config);
    let ctx = Context {
        rows: &rows,
        row_exponents: &row_exponents,
        shift: &shift,
        d,
        budget: &budget,
    };

    let (found, stats) = match config.mode {
        SearchMode::Naive => naive(&ctx),
        SearchMode::Pruned => pruned(&ctx),
    };
    if budget.tripped.load(Ordering::Relaxed) {
        return Err(budget.error());
    }
    let (elements, witnesses) = found.into_iter().unzip();
    Ok((
        ExponentSet {
            order: matrix.order,
            shift,
            elements,
            witnesses,
        },
        stats,
    ))
}

fn sum_stats(a: SearchStats, b: SearchStats) -> SearchStats {
    SearchStats {
        nodes: a.nodes + b.nodes,
        pruned: a.pruned + b.pruned,
        nonzero_minors: a.nonzero_minors + b.nonzero_minors,
    }
}

fn naive(ctx: &Context<'_>) -> (Found, SearchStats) {
    let m = ctx.rows.len();
    let d = ctx.d;
    // work units: subsets sharing a first row
    (0..=m - d)
        .into_par_iter()
        .map(|first| {
            let mut found = Found::new();
            let mut stats = SearchStats::default();
            let mut subset: Vec<usize> = (first..first + d).collect();
            loop {
                if !ctx.budget.tick() {
                    break;
                }
                stats.nodes += 1;
                let minor: Vec<Vec<BigInt>> = subset.iter().map(|&i| ctx.rows[i].clone()).collect();
                if !det_exact(&minor).is_zero() {
                    stats.nonzero_minors += 1;
                    record(&mut found, ctx.exponent_of(&subset), &subset);
                }
                if !next_combination(&mut subset[1..], m) {
                    break;
                }
            }
            (found, stats)
        })
        .reduce(
            || (Found::new(), SearchStats::default()),
            |(fa, sa), (fb, sb)| (merge(fa, fb), sum_stats(sa, sb)),
        )
}

/// Advances a strictly increasing index vector with entries below `m` to the
/// next combination in lex order.
fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < m - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Incremental integer row echelon basis.
#[derive(Clone, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    /// Reduces `v` against the basis; returns the reduced row with its pivot,
    /// or `None` if `v` is in the span.
    fn reduce(&self, v: &[BigInt]) -> Option<(usize, Vec<BigInt>)> {
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let p = &row[*pc];
            let f = v[*pc].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = &*x * p - r * &f;
            }
            normalize(&mut v);
        }
        let pivot = v.iter().position(|x| !x.is_zero())?;
        Some((pivot, v))
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn normalize(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && g.abs() != BigInt::from(1) {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

fn suffix_ranks(rows: &[Vec<BigInt>]) -> Vec<usize> {
    let m = rows.len();
    let mut ranks = vec![0; m + 1];
    let mut basis = Echelon::default();
    for i in (0..m).rev() {
        if let Some(r) = basis.reduce(&rows[i]) {
            basis.rows.push(r);
        }
        ranks[i] = basis.rank();
    }
    ranks
}

/// Mersenne prime `2^61 - 1` for the modular pre-filter.
const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let r = (x as u64 & PRIME) + (x >> 61) as u64;
    let r = (r & PRIME) + (r >> 61);
    if r >= PRIME {
        r - PRIME
    } else {
        r
    }
}

fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

fn to_mod(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = x.mod_floor(&p);
    r.to_u64_digits().1.first().copied().unwrap_or(0)
}

struct PrunedCtx<'a> {
    base: &'a Context<'a>,
    mod_rows: Vec<Vec<u64>>,
    suffix: Vec<usize>,
}

/// Depth-first search over independent row sets.
///
/// The running basis lives modulo a large prime in a per-depth stack.
/// Independence modulo `p` implies independence over `Q`, so only rows the
/// modular test rejects are re-checked exactly; a spurious rejection
/// switches that subtree to exact integer elimination.
struct Dfs<'a, 'b> {
    ctx: &'a PrunedCtx<'b>,
    found: Found,
    stats: SearchStats,
    chosen: Vec<usize>,
    stack: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    scratch: Point,
}

impl Dfs<'_, '_> {
    fn new<'a, 'b>(ctx: &'a PrunedCtx<'b>) -> Dfs<'a, 'b> {
        let d = ctx.base.d;
        Dfs {
            ctx,
            found: Found::new(),
            stats: SearchStats::default(),
            chosen: Vec::with_capacity(d),
            stack: vec![vec![0; d]; d],
            pivots: vec![0; d],
            scratch: vec![0; ctx.base.shift.len()],
        }
    }

    fn leaf(&mut self) {
        self.stats.nonzero_minors += 1;
        let base = self.ctx.base;
        for (x, s) in self.scratch.iter_mut().zip(base.shift) {
            *x = -s;
        }
        for &i in &self.chosen {
            for (x, y) in self.scratch.iter_mut().zip(&base.row_exponents[i]) {
                *x += y;
            }
        }
        if !self.found.contains_key(self.scratch.as_slice()) {
            // subsets are visited in lex order, so the first witness is minimal
            self.found.insert(self.scratch.clone(), self.chosen.clone());
        }
    }

    /// Reduces row `i` into stack slot `depth`; false if it is dependent
    /// modulo the prime.
    fn reduce_mod(&mut self, i: usize, depth: usize) -> bool {
        let (done, rest) = self.stack.split_at_mut(depth);
        let v = &mut rest[0];
        v.copy_from_slice(&self.ctx.mod_rows[i]);
        // rows are stored unnormalized: v <- piv·v - f·row
        for (row, &pc) in done.iter().zip(&self.pivots[..depth]) {
            let f = v[pc];
            if f == 0 {
                continue;
            }
            let piv = row[pc];
            for (x, r) in v.iter_mut().zip(row) {
                *x = submod(mulmod(*x, piv), mulmod(f, *r));
            }
        }
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        self.pivots[depth] = pivot;
        true
    }

    fn exact_basis(&self) -> Echelon {
        let mut exact = Echelon::default();
        for &c in &self.chosen {
            let r = exact
                .reduce(&self.ctx.base.rows[c])
                .expect("chosen rows are independent");
            exact.rows.push(r);
        }
        exact
    }

    fn cut(&mut self, i: usize, need: usize) -> bool {
        let m = self.ctx.base.rows.len();
        if m - i < need || self.ctx.suffix[i] < need {
            self.stats.pruned += 1;
            return true;
        }
        false
    }

    /// Explores completions of `chosen` from row `start` on; false once the
    /// budget is exhausted.
    fn go_mod(&mut self, start: usize) -> bool {
        let base = self.ctx.base;
        let depth = self.chosen.len();
        if depth == base.d {
            self.leaf();
            return true;
        }
        let need = base.d - depth;
        let mut exact: Option<Echelon> = None;
        for i in start..base.rows.len() {
            if self.cut(i, need) {
                break;
            }
            if !base.budget.tick() {
                return false;
            }
            self.stats.nodes += 1;
            let ok = if self.reduce_mod(i, depth) {
                self.chosen.push(i);
                let ok = self.go_mod(i + 1);
                self.chosen.pop();
                ok
            } else {
                let ex = exact.get_or_insert_with(|| self.exact_basis());
                match ex.reduce(&base.rows[i]) {
                    Some(r) => {
                        let mut next = ex.clone();
                        next.rows.push(r);
                        self.chosen.push(i);
                        let ok = self.go_exact(i + 1, &next);
                        self.chosen.pop();
                        ok
                    }
                    None => {
                        self.stats.pruned += 1;
                        true
                    }
                }
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn go_exact(&mut self, start: usize, basis: &Echelon) -> bool {
        let base = self.ctx.base;
        let depth = self.chosen.len();
        if depth == base.d {
            self.leaf();
            return true;
        }
        let need = base.d - depth;
        for i in start..base.rows.len() {
            if self.cut(i, need) {
                break;
            }
            if !base.budget.tick() {
                return false;
            }
            self.stats.nodes += 1;
            match basis.reduce(&base.rows[i]) {
                None => self.stats.pruned += 1,
                Some(r) => {
                    let mut next = basis.clone();
                    next.rows.push(r);
                    self.chosen.push(i);
                    let ok = self.go_exact(i + 1, &next);
                    self.chosen.pop();
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn pruned(ctx: &Context<'_>) -> (Found, SearchStats) {
    let m = ctx.rows.len();
    let d = ctx.d;
    let pctx = PrunedCtx {
        base: ctx,
        mod_rows: ctx
            .rows
            .iter()
            .map(|r| r.iter().map(to_mod).collect())
            .collect(),
        suffix: suffix_ranks(ctx.rows),
    };

    // each first row roots an independent subtree
    (0..=m - d)
        .into_par_iter()
        .map(|first| {
            let mut dfs = Dfs::new(&pctx);
            if pctx.suffix[first] < d || !ctx.budget.tick() {
                return (dfs.found, dfs.stats);
            }
            dfs.stats.nodes += 1;
            if dfs.reduce_mod(first, 0) {
                dfs.chosen.push(first);
                dfs.go_mod(first + 1);
            } else if let Some(r) = Echelon::default().reduce(&ctx.rows[first]) {
                dfs.chosen.push(first);
                dfs.go_exact(first + 1, &Echelon { rows: vec![r] });
            } else {
                dfs.stats.pruned += 1;
            }
            (dfs.found, dfs.stats)
        })
        .reduce(
            || (Found::new(), SearchStats::default()),
            |(fa, sa), (fb, sb)| (merge(fa, fb), sum_stats(sa, sb)),
        )
}
