#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use common::*;
use lietk::adjoint::{bch_order_estimate, check_ad_exp, BchOrder, OrderEstimate};
use lietk::algebra::{build_classical, center, split_simple_ideals, Family, LieAlgebra};
use lietk::cartan::{
    centralizer_cartan, choose_positive, coroot, root_decomposition, stabilizer_algebra, DecompositionOptions,
    PositiveChoice, RootSystem,
};
use lietk::dynkin::{diagram_of, render_ascii};
use lietk::geometry::{
    curvature_form, einstein_constant, orbit_shape_operator, parallel_orbit_check, ricci, sectional,
    BiInvariantMetric,
};
use lietk::numlin::ComplexMatrix;
use lietk::weyl::{generate, in_closed_chamber, weyl_orbit, WeylGroup};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn lie<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn re_trace_xy_adj(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    x.try_mul(&y.adjoint()).expect("square").trace().re
}

/// Killing form against `−2n Re tr(XY*)` on `su(n)`.
fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 2..=4 {
        let l = algebra(Family::Su, n);
        for _ in 0..100 {
            let x = random_coords(l.dim(), &mut rng);
            let y = random_coords(l.dim(), &mut rng);
            let b = l.killing().eval(&x, &y);
            let expected = -2.0 * n as f64 * re_trace_xy_adj(&l.element(&x), &l.element(&y));
            ensure!(rel_close(b, expected, 1e-8), "su({n}): B = {b}, expected {expected}");
        }
    }
    Ok(())
}

/// Roots of `su(3)` and `so(7)` against analytic lists.
fn criterion_2() -> Outcome {
    let su3 = system(Family::Su, 3);
    let found: Vec<Vec<f64>> = su3.roots().iter().map(|r| r.coords.clone()).collect();
    ensure!(found.len() == 6, "su(3) has {} roots", found.len());
    ensure!(same_vector_set(&found, &su_analytic_roots(&su3, 3), 1e-7), "su(3) roots {found:?}");

    let so7 = system(Family::So, 7);
    let found: Vec<Vec<f64>> = so7.roots().iter().map(|r| r.coords.clone()).collect();
    ensure!(found.len() == 18, "so(7) has {} roots", found.len());
    ensure!(same_vector_set(&found, &b_analytic_roots(3), 1e-7), "so(7) roots {found:?}");
    Ok(())
}

fn angle_deg(a: &[f64], b: &[f64]) -> f64 {
    (dot(a, b) / (dot(a, a) * dot(b, b)).sqrt()).acos().to_degrees()
}

/// Simple roots of `so(7)`, their norms and angles.
fn criterion_3() -> Outcome {
    let rs = system(Family::So, 7);
    let simple = rs.simple_vectors();
    let expected = [vec![1.0, -1.0, 0.0], vec![0.0, 1.0, -1.0], vec![0.0, 0.0, 1.0]];
    ensure!(same_vector_set(&simple, &expected, 1e-7), "simple roots {simple:?}");
    // Order along the chain by matching the analytic list.
    let ordered: Vec<&Vec<f64>> = expected
        .iter()
        .map(|e| simple.iter().find(|s| max_dist(s, e) < 1e-7).unwrap())
        .collect();
    let norms: Vec<f64> = ordered.iter().map(|s| dot(s, s).sqrt()).collect();
    let want = [2f64.sqrt(), 2f64.sqrt(), 1.0];
    for (k, (a, b)) in norms.iter().zip(want).enumerate() {
        ensure!((a - b).abs() <= 1e-7, "norm of simple root {k} is {a}, expected {b}");
    }
    let angles = [angle_deg(ordered[0], ordered[1]), angle_deg(ordered[1], ordered[2])];
    ensure!((angles[0] - 120.0).abs() <= 1e-7, "angle(α1, α2) = {}", angles[0]);
    ensure!((angles[1] - 135.0).abs() <= 1e-7, "angle(α2, α3) = {}", angles[1]);
    Ok(())
}

fn label(f: Family, n: usize) -> Result<String, String> {
    Ok(lie(diagram_of(&system(f, n)))?.label())
}

/// Dynkin classification table and the `so(7)` rendering.
fn criterion_4() -> Outcome {
    let mut cases: Vec<(Family, usize, String)> = Vec::new();
    for k in 1..=5 {
        cases.push((Family::Su, k + 1, format!("A{k}")));
    }
    for k in 2..=4 {
        cases.push((Family::So, 2 * k + 1, format!("B{k}")));
    }
    cases.push((Family::Sp, 3, "C3".into()));
    cases.push((Family::So, 8, "D4".into()));
    for (f, n, want) in cases {
        let got = label(f, n)?;
        ensure!(got == want, "{}: got {got}, expected {want}", f.label(n));
    }
    let ascii = render_ascii(&lie(diagram_of(&system(Family::So, 7)))?);
    ensure!(ascii == "o - o => o", "so(7) renders as {ascii:?}");
    Ok(())
}

fn same_matrix_set(a: &[DMatrix<f64>], b: &[DMatrix<f64>], tol: f64) -> bool {
    let flat = |ms: &[DMatrix<f64>]| -> Vec<Vec<f64>> { ms.iter().map(|m| m.iter().copied().collect()).collect() };
    same_vector_set(&flat(a), &flat(b), tol)
}

fn chamber_hits(rs: &RootSystem, w: &WeylGroup, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..5 {
        let x = random_coords(rs.rank(), rng);
        ensure!(lietk::cartan::is_regular(rs, &x), "sampled a singular point");
        let orbit = weyl_orbit(w, &x);
        ensure!(orbit.len() == w.order(), "regular orbit has {} points", orbit.len());
        let hits = orbit.iter().filter(|p| in_closed_chamber(rs, p)).count();
        ensure!(hits == 1, "regular orbit meets the closed chamber {hits} times");
    }
    Ok(())
}

/// Weyl orders and matrices against (signed) permutation oracles.
fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, order) in [(2, 2), (3, 6), (4, 24)] {
        let rs = system(Family::Su, n);
        let w = lie(generate(&rs))?;
        let oracle = su_permutation_oracle(&rs, n);
        ensure!(w.order() == order && oracle.len() == order, "|W(su({n}))| = {}", w.order());
        let mats: Vec<DMatrix<f64>> = w.elements().iter().map(|e| e.matrix.clone()).collect();
        ensure!(same_matrix_set(&mats, &oracle, 1e-8), "W(su({n})) differs from the permutation group");
        chamber_hits(&rs, &w, &mut rng)?;
    }
    for (f, n, k, order) in [(Family::So, 5, 2, 8), (Family::So, 7, 3, 48), (Family::Sp, 3, 3, 48)] {
        let rs = system(f, n);
        let w = lie(generate(&rs))?;
        let oracle = signed_permutations(k);
        ensure!(w.order() == order && oracle.len() == order, "|W({})| = {}", f.label(n), w.order());
        let mats: Vec<DMatrix<f64>> = w.elements().iter().map(|e| e.matrix.clone()).collect();
        ensure!(same_matrix_set(&mats, &oracle, 1e-8), "W({}) differs from the signed permutations", f.label(n));
        chamber_hits(&rs, &w, &mut rng)?;
    }
    Ok(())
}

/// `Ad ∘ exp = exp ∘ ad`.
fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (f, n) in [(Family::Su, 2), (Family::Su, 3), (Family::So, 5)] {
        let l = algebra(f, n);
        for _ in 0..100 {
            let x = random_unit(&l, &mut rng);
            let r = lie(check_ad_exp(&l, &x))?;
            ensure!(r <= 1e-8, "{}: residual {r}", l.name());
        }
    }
    Ok(())
}

/// Second-order BCH remainder is third order; commuting pairs are exact.
fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (f, n) in [(Family::Su, 2), (Family::So, 3)] {
        let l = algebra(f, n);
        for _ in 0..10 {
            let x = random_unit(&l, &mut rng);
            let y = random_unit(&l, &mut rng);
            let est = lie(bch_order_estimate(&l, &x, &y, BchOrder::Second))?;
            let slope = est.slope().ok_or_else(|| format!("{}: non-commuting pair reported exact", l.name()))?;
            ensure!((2.9..=3.3).contains(&slope), "{}: slope {slope}", l.name());
        }
        let x = random_unit(&l, &mut rng);
        let y: Vec<f64> = x.iter().map(|v| -0.7 * v).collect();
        match lie(bch_order_estimate(&l, &x, &y, BchOrder::Second))? {
            OrderEstimate::Exact { max_residual } => {
                ensure!(max_residual <= 1e-10, "{}: commuting residual {max_residual}", l.name())
            }
            other => return Err(format!("{}: commuting pair gave {other:?}", l.name())),
        }
    }
    Ok(())
}

/// Independent Killing form: `2n tr(XY)` on `su(n)`, `(n − 2) tr(XY)` on `so(n)`.
fn killing_oracle(f: Family, n: usize, l: &LieAlgebra, x: &[f64], y: &[f64]) -> f64 {
    let tr = l.element(x).try_mul(&l.element(y)).expect("square").trace().re;
    match f {
        Family::Su => 2.0 * n as f64 * tr,
        Family::So => (n as f64 - 2.0) * tr,
        _ => unreachable!(),
    }
}

/// Ricci, curvature and Einstein identities of the bi-invariant metric.
fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (f, n) in [(Family::Su, 2), (Family::Su, 3), (Family::So, 5)] {
        let l = algebra(f, n);
        let m = lie(BiInvariantMetric::trace_form(l.clone()))?;
        let onb = m.orthonormal_basis();
        for _ in 0..50 {
            let x = random_unit(&l, &mut rng);
            let y = random_unit(&l, &mut rng);
            let ric: f64 = onb.iter().map(|e| curvature_form(&m, &x, e, &y, e)).sum();
            let expected = -0.25 * killing_oracle(f, n, &l, &x, &y);
            ensure!(rel_close(ric, expected, 1e-8), "{}: Ric {ric} vs −B/4 {expected}", l.name());
            let lib = lie(ricci(&m, &x, &y))?;
            ensure!(rel_close(lib, expected, 1e-8), "{}: ricci() {lib} vs {expected}", l.name());

            let br = l.bracket(&x, &y);
            let lhs = curvature_form(&m, &x, &y, &x, &y);
            let rhs = 0.25 * m.inner(&br, &br);
            ensure!((lhs - rhs).abs() <= 1e-9, "{}: ⟨R(X,Y)X,Y⟩ {lhs} vs {rhs}", l.name());

            let k = lie(sectional(&m, &x, &y))?;
            ensure!(k >= -1e-12, "{}: sectional curvature {k}", l.name());
        }
    }
    for n in 2..=4 {
        let m = lie(BiInvariantMetric::trace_form(algebra(Family::Su, n)))?;
        let lambda = lie(einstein_constant(&m))?;
        ensure!((lambda - n as f64 / 2.0).abs() <= 1e-8, "su({n}): Einstein constant {lambda}");
    }
    Ok(())
}

fn regular_point(rs: &RootSystem, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let z = random_coords(rs.rank(), rng);
        let min = rs.roots().iter().map(|r| r.value(&z).abs()).fold(f64::INFINITY, f64::min);
        if min > 0.2 {
            return z;
        }
    }
}

/// Principal curvatures against finite differences, and the parallel-orbit check.
fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in [2, 3] {
        let rs = system(Family::Su, n);
        let l = rs.algebra().clone();
        let w = lie(generate(&rs))?;
        for _ in 0..5 {
            let z = regular_point(&rs, &mut rng);
            let nn = random_coords(rs.rank(), &mut rng);
            lie(orbit_shape_operator(&rs, &z, &nn))?;
            let xi0: Vec<f64> = random_coords(l.dim(), &mut rng);
            let err = fd_shape_error(&rs, &z, &nn, &xi0, 1e-4);
            ensure!(err <= 1e-4, "su({n}): finite-difference shape operator error {err}");
        }

        let mut configs: Vec<(Vec<f64>, Vec<f64>, bool)> = Vec::new();
        for _ in 0..4 {
            let z = regular_point(&rs, &mut rng);
            let nn: Vec<f64> = random_coords(rs.rank(), &mut rng).iter().map(|v| 0.3 * v).collect();
            configs.push((z, nn, false));
        }
        let z = regular_point(&rs, &mut rng);
        let a = rs.simple()[0];
        let c = rs.root(a).value(&z) / 2.0;
        let wall: Vec<f64> = coroot(&rs, a).iter().map(|v| -c * v).collect();
        configs.push((z, wall, true));

        for (k, (z, nn, on_wall)) in configs.iter().enumerate() {
            let report = lie(parallel_orbit_check(&rs, &w, z, nn, 5, 100 + k as u64))?;
            ensure!(report.passed, "su({n}) config {k}: {report:?}");
            if *on_wall {
                let zn: Vec<f64> = z.iter().zip(nn).map(|(a, b)| a + b).collect();
                let vanishing = rs.positive().iter().filter(|&&i| rs.root(i).value(&zn).abs() < 1e-9).count();
                let predicted = (stabilizer_algebra(&rs, z).orbit_dim, stabilizer_algebra(&rs, z).orbit_dim - 2 * vanishing);
                ensure!(vanishing >= 1, "su({n}): wall configuration is regular");
                ensure!(
                    report.dimension_drop() == Some(predicted),
                    "su({n}): drop {:?}, predicted {predicted:?}",
                    report.dimension_drop()
                );
            }
        }
    }
    Ok(())
}

fn classify_ideal(ideal: LieAlgebra) -> Result<String, String> {
    let t = lie(centralizer_cartan(Arc::new(ideal), None, 0))?;
    let rs = lie(root_decomposition(&t, DecompositionOptions::default()))?;
    let rs = lie(choose_positive(&rs, PositiveChoice::Auto { seed: 0 }))?;
    Ok(lie(diagram_of(&rs))?.label())
}

/// Jacobi identity, simple ideals of `so(4)`, centers of `u(n)` and `su(n)`.
fn criterion_10() -> Outcome {
    let mut cases: Vec<(Family, usize)> = Vec::new();
    for f in [Family::GlR, Family::GlC, Family::SlR, Family::SlC, Family::Su, Family::U] {
        cases.extend((2..=4).map(|n| (f, n)));
    }
    cases.extend((2..=8).map(|n| (Family::So, n)));
    cases.extend((1..=3).map(|n| (Family::Sp, n)));
    for (f, n) in cases {
        let l = lie(build_classical(f, n))?;
        let r = l.structure().jacobi_residual();
        ensure!(r <= 1e-10, "{}: Jacobi residual {r}", l.name());
    }

    let ideals = lie(split_simple_ideals(&algebra(Family::So, 4)))?;
    ensure!(ideals.len() == 2, "so(4) splits into {} ideals", ideals.len());
    for ideal in ideals {
        ensure!(ideal.dim() == 3, "ideal of dimension {}", ideal.dim());
        let got = classify_ideal(ideal)?;
        ensure!(got == "A1", "ideal classifies as {got}");
    }

    for n in 2..=3 {
        let zu = center(&algebra(Family::U, n)).len();
        let zs = center(&algebra(Family::Su, n)).len();
        ensure!(zu == 1, "dim center(u({n})) = {zu}");
        ensure!(zs == 0, "dim center(su({n})) = {zs}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Killing form of su(n) equals -2n Re tr(XY*)", criterion_1),
        ("roots of su(3) and so(7) match the analytic lists", criterion_2),
        ("simple roots of so(7), norms and angles", criterion_3),
        ("Dynkin classification table and so(7) rendering", criterion_4),
        ("Weyl groups match permutation oracles; chamber meets orbits once", criterion_5),
        ("Ad exp equals exp ad", criterion_6),
        ("second-order BCH remainder has slope 3; commuting pairs exact", criterion_7),
        ("Ricci, curvature and Einstein identities", criterion_8),
        ("orbit principal curvatures and parallel orbits", criterion_9),
        ("Jacobi, simple ideals of so(4), centers", criterion_10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (desc, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {}: PASS: {desc} ({secs:.2}s)", k + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL: {desc}: {e} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!("acceptance: {} of 10 passed in {:.2}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
