#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toric_nash::jets::Polynomial;
use toric_nash::lattice_geometry::{contains_origin, zspan_is_full};
use toric_nash::{GeneratorMatrix, Point};

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn surface() -> GeneratorMatrix {
    GeneratorMatrix::from_columns(vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![2, 5]]).unwrap()
}

/// Non-zero rational with small numerator and denominator.
pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let n: i64 = rng.gen_range(-5..=5);
        if n != 0 {
            return BigRational::new(n.into(), BigInt::from(rng.gen_range(1..=3i64)));
        }
    }
}

/// Random polynomial in `vars` variables of total degree ≤ `deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, vars: usize, deg: u32) -> Polynomial {
    let mut p = Polynomial::zero(vars);
    for _ in 0..rng.gen_range(1..=4) {
        let mut e = vec![0i64; vars];
        let mut left = rng.gen_range(0..=deg);
        for x in e.iter_mut() {
            let k = rng.gen_range(0..=left);
            *x = k as i64;
            left -= k;
        }
        let c = q(rng.gen_range(-3..=3));
        p = p.add(&Polynomial::monomial(vars, e, c));
    }
    p
}

/// Random generator matrix with entries in `[lo, hi]`.
pub fn random_generators(
    rng: &mut ChaCha8Rng,
    d: usize,
    s: usize,
    lo: i64,
    hi: i64,
) -> GeneratorMatrix {
    let cols = (0..s)
        .map(|_| (0..d).map(|_| rng.gen_range(lo..=hi)).collect())
        .collect();
    GeneratorMatrix::new(d, cols).unwrap()
}

/// Random input satisfying the standing hypotheses (full span, essential).
pub fn random_valid_input(rng: &mut ChaCha8Rng, d: usize, s: usize) -> GeneratorMatrix {
    loop {
        let a = random_generators(rng, d, s, -2, 4);
        let cols = a.columns();
        let distinct = cols.iter().collect::<std::collections::BTreeSet<_>>().len() == cols.len();
        if distinct && zspan_is_full(cols) && !contains_origin(cols).unwrap() {
            return a;
        }
    }
}

/// Cofactor-expansion determinant over the rationals.
pub fn cofactor_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut total = BigRational::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigRational>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let t = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            total += t;
        } else {
            total -= t;
        }
    }
    total
}

/// Rank by plain Gaussian elimination over the rationals.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// All `k`-subsets of `0..n` in lex order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive semigroup membership: every coefficient vector with total at
/// most `bound`.
pub fn member_exhaustive(target: &[i64], gens: &[Point], bound: u32) -> bool {
    fn go(i: usize, left: u32, residual: &mut Vec<i64>, gens: &[Point]) -> bool {
        if residual.iter().all(|&x| x == 0) {
            return true;
        }
        if i == gens.len() {
            return false;
        }
        for k in 0..=left {
            if k > 0 {
                for (r, g) in residual.iter_mut().zip(&gens[i]) {
                    *r -= g;
                }
            }
            if go(i + 1, left - k, residual, gens) {
                return true;
            }
        }
        for (r, g) in residual.iter_mut().zip(&gens[i]) {
            *r += g * i64::from(left);
        }
        false
    }
    go(0, bound, &mut target.to_vec(), gens)
}
