//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain binary
//! (`harness = false`) and exits non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_nash::jets::{compose_check, jet_jacobian, monomial_map, Polynomial};
use toric_nash::lattice_geometry::{
    origin_certificate, positive_functional, verify_convex_combination, verify_functional,
};
use toric_nash::multiindex::binomial;
use toric_nash::{
    build_coeff_matrix, exponent_set, nash_step, nonzero_minor_exponents, resolve, GeneratorMatrix,
    PipelineConfig, Point, SearchConfig, SearchMode, Verdict,
};
use toric_nash_cli::{run, MatrixDump, EXIT_OK};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Outcome {
    ensure(elapsed < limit, || {
        format!("{what} took {elapsed:?}, limit {limit:?}")
    })
}

fn pts(v: &[(i64, i64)]) -> Vec<Point> {
    let mut out: Vec<Point> = v.iter().map(|&(a, b)| vec![a, b]).collect();
    out.sort();
    out
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let value = f();
    (value, start.elapsed())
}

/// The published 63-element exponent table at order two, row by row.
fn order_two_table() -> Vec<Point> {
    let rows: [(i64, std::ops::RangeInclusive<i64>); 6] = [
        (3, 0..=8),
        (4, 0..=11),
        (5, 4..=15),
        (6, 8..=18),
        (7, 12..=21),
        (8, 16..=24),
    ];
    rows.iter()
        .flat_map(|(x, ys)| ys.clone().map(move |y| vec![*x, y]))
        .collect()
}

fn curve_matrix() -> Outcome {
    let input = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/curve.json");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let (code, elapsed) = timed(|| {
        run(
            [
                "toric-nash",
                "--input",
                input,
                "--emit",
                "json",
                "matrix",
                "--order",
                "2",
            ],
            &mut out,
            &mut err,
        )
    });
    ensure(code == EXIT_OK, || {
        format!("exit code {code}: {}", String::from_utf8_lossy(&err))
    })?;
    let dump: MatrixDump = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    let c: Vec<Vec<String>> = dump
        .rows
        .iter()
        .map(|r| r.entries.iter().map(|e| e.c.clone()).collect())
        .collect();
    let expected_c = [["1", "0"], ["2", "1"], ["0", "1"], ["0", "2"], ["0", "4"]];
    ensure(c == expected_c, || format!("coefficients {c:?}"))?;
    // Aβ - α with A = (1 2)
    for row in &dump.rows {
        let a_beta = i64::from(row.beta[0]) + 2 * i64::from(row.beta[1]);
        for (entry, alpha) in row.entries.iter().zip(&dump.cols) {
            let expected = a_beta - i64::from(alpha[0]);
            ensure(entry.exponent == [expected], || {
                format!("row {:?}: exponent {:?}", row.beta, entry.exponent)
            })?;
        }
    }
    within(elapsed, Duration::from_secs(1), "matrix --order 2")
}

fn order_one_set() -> Outcome {
    let (result, elapsed) = timed(|| exponent_set(&surface(), 1, &PipelineConfig::default()));
    let (s, _) = result.map_err(|e| e.to_string())?;
    let expected = pts(&[(1, 0), (1, 1), (1, 2), (2, 4), (2, 5), (2, 6)]);
    ensure(s.elements == expected, || format!("S = {:?}", s.elements))?;
    within(elapsed, Duration::from_secs(1), "order-1 exponent set")
}

fn order_one_verdict() -> Outcome {
    let step = nash_step(&surface(), 1, &PipelineConfig::default()).map_err(|e| e.to_string())?;
    let mut problems = Vec::new();
    let centers: Vec<Point> = step.essential_charts().map(|c| c.center.clone()).collect();
    if centers != [vec![2, 6]] {
        problems.push(format!(
            "essential centers {centers:?}, expected exactly [(2,6)]"
        ));
    }
    match step.essential_charts().find(|c| c.center == [2, 6]) {
        None => problems.push("chart (2,6) is not essential".into()),
        Some(chart) => {
            let mins = chart.minimal_generators.clone().unwrap_or_default();
            if mins != pts(&[(-1, -4), (0, -1), (1, 2), (2, 5)]) {
                problems.push(format!("chart (2,6): minimal generators {mins:?}"));
            }
            if chart.smooth != Some(false) {
                problems.push("chart (2,6) reported smooth".into());
            }
        }
    }
    if step.all_smooth {
        problems.push("order 1 reported non-singular".into());
    }
    ensure(problems.is_empty(), || problems.join("; "))
}

fn order_two_set() -> Outcome {
    let c = build_coeff_matrix(&surface(), 2).map_err(|e| e.to_string())?;
    let run_mode = |mode| {
        timed(|| {
            nonzero_minor_exponents(
                &c,
                &SearchConfig {
                    mode,
                    ..Default::default()
                },
            )
        })
    };
    let (naive, t_naive) = run_mode(SearchMode::Naive);
    let (pruned, t_pruned) = run_mode(SearchMode::Pruned);
    let naive = naive.map_err(|e| e.to_string())?.0;
    let pruned = pruned.map_err(|e| e.to_string())?.0;
    let table = order_two_table();
    ensure(naive.len() == 63, || format!("|S| = {}", naive.len()))?;
    ensure(naive.elements == table, || {
        "naive S differs from the table".into()
    })?;
    ensure(pruned.elements == table, || {
        "pruned S differs from the table".into()
    })?;
    within(t_naive, Duration::from_secs(10), "naive enumeration")?;
    within(t_pruned, Duration::from_secs(2), "pruned enumeration")
}

fn order_two_verdict() -> Outcome {
    let step = nash_step(&surface(), 2, &PipelineConfig::default()).map_err(|e| e.to_string())?;
    let expected = [
        (vec![3, 0], pts(&[(1, 0), (0, 1)])),
        (vec![3, 8], pts(&[(0, -1), (1, 3)])),
        (vec![5, 15], pts(&[(1, 3), (-2, -7)])),
        (vec![8, 24], pts(&[(2, 5), (-1, -3)])),
    ];
    let centers: Vec<Point> = step.essential_charts().map(|c| c.center.clone()).collect();
    let expected_centers: Vec<Point> = expected.iter().map(|(c, _)| c.clone()).collect();
    ensure(centers == expected_centers, || {
        format!("essential centers {centers:?}")
    })?;
    let mut problems = Vec::new();
    for (chart, (center, mins)) in step.essential_charts().zip(&expected) {
        let got = chart.minimal_generators.clone().unwrap_or_default();
        if &got != mins || chart.smooth != Some(true) {
            problems.push(format!(
                "chart {center:?}: minimal generators {got:?}, smooth {:?}",
                chart.smooth
            ));
        }
    }
    let report = resolve(&surface(), 2, &PipelineConfig::default()).map_err(|e| e.to_string())?;
    if report.verdict != (Verdict::SmoothAtOrder { order: 2 }) {
        problems.push(format!("resolve verdict {:?}", report.verdict));
    }
    ensure(problems.is_empty(), || problems.join("; "))
}

fn jet_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    for case in 0..100 {
        let d = rng.gen_range(1..=3);
        let s = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=3);
        let phi: Vec<_> = (0..s).map(|_| random_poly(&mut rng, d, 2)).collect();
        let psi: Vec<_> = (0..r).map(|_| random_poly(&mut rng, s, 2)).collect();
        let x: Vec<_> = (0..d).map(|_| nonzero_rational(&mut rng)).collect();
        ensure(
            compose_check(&psi, &phi, &x, n).map_err(|e| e.to_string())?,
            || format!("chain rule, case {case}"),
        )?;
        let m = jet_jacobian(&phi, &x, n).map_err(|e| e.to_string())?;
        for (i, beta) in m.rows.iter().enumerate() {
            for (j, alpha) in m.cols.iter().enumerate() {
                ensure(
                    alpha.degree() >= beta.degree() || m.entry(i, j).is_zero(),
                    || format!("triangle, case {case}, entry ({i},{j})"),
                )?;
            }
        }
    }
    for d in 1..=3 {
        for n in 1..=3 {
            let id: Vec<_> = (0..d).map(|i| Polynomial::variable(d, i)).collect();
            let x: Vec<_> = (0..d).map(|_| nonzero_rational(&mut rng)).collect();
            ensure(
                jet_jacobian(&id, &x, n)
                    .map_err(|e| e.to_string())?
                    .is_identity(),
                || format!("identity, d = {d}, n = {n}"),
            )?;
        }
    }
    Ok(())
}

fn monomial_fast_path() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    for case in 0..50 {
        let d = rng.gen_range(1..=3);
        let s = rng.gen_range(d..=5);
        let n = rng.gen_range(1..=3);
        let a = random_generators(&mut rng, d, s, -2, 3);
        let x: Vec<_> = (0..d).map(|_| nonzero_rational(&mut rng)).collect();
        let c = build_coeff_matrix(&a, n).map_err(|e| e.to_string())?;
        let jet = jet_jacobian(&monomial_map(a.columns(), d), &x, n).map_err(|e| e.to_string())?;
        for i in 0..c.num_rows() {
            for j in 0..c.num_cols() {
                ensure(c.evaluate(i, j, &x) == *jet.entry(i, j), || {
                    format!(
                        "case {case}: A = {:?}, n = {n}, entry ({i},{j})",
                        a.columns()
                    )
                })?;
            }
        }
    }
    for case in 0..20 {
        let s = rng.gen_range(2..=4);
        let a = random_generators(&mut rng, 2, s, -2, 4);
        let n = rng.gen_range(1..=2);
        let c = build_coeff_matrix(&a, n).map_err(|e| e.to_string())?;
        let cols = c.num_cols();
        let mut rows: Vec<usize> = (0..c.num_rows()).collect();
        rows.shuffle(&mut rng);
        let mut j = rows[..cols].to_vec();
        j.sort();
        let x: Vec<_> = (0..2).map(|_| nonzero_rational(&mut rng)).collect();
        let evaluated: Vec<Vec<BigRational>> = j
            .iter()
            .map(|&i| (0..cols).map(|k| c.evaluate(i, k, &x)).collect())
            .collect();
        let constant: Vec<Vec<BigRational>> = j.iter().map(|&i| c.entries[i].clone()).collect();
        let mut m_hat: Vec<i64> = c.shift().iter().map(|v| -v).collect();
        for &i in &j {
            for (acc, e) in m_hat.iter_mut().zip(c.row_exponent(i)) {
                *acc += e;
            }
        }
        let monomial = x
            .iter()
            .zip(&m_hat)
            .fold(q(1), |acc, (xi, &e)| acc * xi.pow(e as i32));
        ensure(
            cofactor_det(&evaluated) == monomial * cofactor_det(&constant),
            || format!("factorization, case {case}: J = {j:?}"),
        )?;
    }
    Ok(())
}

fn enumeration_corpus() -> Vec<(GeneratorMatrix, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut corpus = vec![(surface(), 1), (surface(), 2)];
    while corpus.len() < 32 {
        let s = rng.gen_range(2..=4);
        let a = random_generators(&mut rng, 2, s, -2, 4);
        let n = rng.gen_range(1..=2);
        let m = binomial(u64::from(n) + s as u64, s as u64)
            .to_u64()
            .unwrap()
            - 1;
        let d = binomial(u64::from(n) + 2, 2).to_u64().unwrap() - 1;
        if m >= d && binomial(m, d).to_u64().is_some_and(|k| k <= 1_000_000) {
            corpus.push((a, n));
        }
    }
    corpus
}

fn oracle_equivalence() -> Outcome {
    for (a, n) in enumeration_corpus() {
        let c = build_coeff_matrix(&a, n).map_err(|e| e.to_string())?;
        let naive = nonzero_minor_exponents(
            &c,
            &SearchConfig {
                mode: SearchMode::Naive,
                ..Default::default()
            },
        );
        let pruned = nonzero_minor_exponents(
            &c,
            &SearchConfig {
                mode: SearchMode::Pruned,
                ..Default::default()
            },
        );
        let same = match (&naive, &pruned) {
            (Ok((x, _)), Ok((y, _))) => x.elements == y.elements,
            (Err(x), Err(y)) => x == y,
            _ => false,
        };
        ensure(same, || format!("A = {:?}, n = {n}", a.columns()))?;
    }
    Ok(())
}

fn geometry_certificates() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    for case in 0..250 {
        let d = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=8);
        let points: Vec<Point> = (0..k)
            .map(|_| (0..d).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let lambda = origin_certificate(&points).map_err(|e| e.to_string())?;
        let w = positive_functional(&points).map_err(|e| e.to_string())?;
        ensure(lambda.is_some() != w.is_some(), || {
            format!("case {case}: alternatives not exclusive/exhaustive")
        })?;
        if let Some(l) = lambda {
            ensure(verify_convex_combination(&points, &l), || {
                format!("case {case}: bad convex combination")
            })?;
        }
        if let Some(w) = w {
            ensure(verify_functional(&points, &w), || {
                format!("case {case}: bad functional")
            })?;
        }
    }
    Ok(())
}

fn rank_claim() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let mut corpus = vec![
        surface(),
        GeneratorMatrix::from_columns(vec![vec![1], vec![2]]).unwrap(),
        GeneratorMatrix::from_columns(vec![vec![2], vec![3]]).unwrap(),
    ];
    for _ in 0..10 {
        let s = rng.gen_range(2..=4);
        corpus.push(random_valid_input(&mut rng, 2, s));
    }
    corpus.extend((0..3).map(|_| random_valid_input(&mut rng, 3, 4)));
    for a in &corpus {
        for n in 1..=2 {
            let (s, _) =
                exponent_set(a, n, &PipelineConfig::default()).map_err(|e| e.to_string())?;
            ensure(!s.is_empty(), || {
                format!("S empty for A = {:?}, n = {n}", a.columns())
            })?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("curve coefficient matrix at order 2", curve_matrix),
        ("surface exponent set at order 1", order_one_set),
        ("surface verdict at order 1", order_one_verdict),
        ("surface exponent set at order 2", order_two_set),
        ("surface verdict at order 2", order_two_verdict),
        ("jet property suite", jet_properties),
        ("monomial fast path vs jet oracle", monomial_fast_path),
        ("pruned vs naive enumeration", oracle_equivalence),
        ("exact geometry certificates", geometry_certificates),
        ("non-empty exponent sets", rank_claim),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
