//! Exact phase-one simplex over the rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Finds `x ≥ 0` with `a x = b`, or `None` if no such point exists.
pub(crate) fn feasible_point(
    a: &[Vec<BigRational>],
    b: &[BigRational],
) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let vars = a.first().map_or(0, Vec::len);
    // tableau columns: original vars, one artificial per row, rhs
    let width = vars + rows + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(rows + 1);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut r: Vec<BigRational> = Vec::with_capacity(width);
        r.extend(
            row.iter()
                .map(|v| if flip { -v.clone() } else { v.clone() }),
        );
        r.extend((0..rows).map(|k| {
            if k == i {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }));
        r.push(if flip { -rhs.clone() } else { rhs.clone() });
        t.push(r);
    }
    // objective row: minimize the sum of artificials, written as reduced costs
    let mut obj = vec![BigRational::zero(); width];
    for r in &t {
        for j in 0..vars {
            obj[j] -= &r[j];
        }
        obj[width - 1] -= &r[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (vars..vars + rows).collect();

    loop {
        let costs = &t[rows];
        // Bland: smallest index with negative reduced cost
        let Some(enter) = (0..width - 1).find(|&j| costs[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // unbounded cannot happen for a phase-one objective bounded below by 0
            break;
        };
        pivot(&mut t, pr, enter);
        basis[pr] = enter;
    }

    if !t[rows][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); vars];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < vars {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], pr: usize, pc: usize) {
    let p = t[pr][pc].clone();
    for v in t[pr].iter_mut() {
        *v /= &p;
    }
    let prow = t[pr].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}
