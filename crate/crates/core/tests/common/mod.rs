#![allow(dead_code)]

use std::sync::Arc;

use lietk::adjoint::{adjoint_action, exp_element};
use lietk::algebra::{build_classical, Family, LieAlgebra};
use lietk::cartan::{choose_positive, root_decomposition, standard_cartan, DecompositionOptions, PositiveChoice, RootSystem};
use lietk::numlin::ComplexMatrix;
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn algebra(f: Family, n: usize) -> Arc<LieAlgebra> {
    Arc::new(build_classical(f, n).expect("classical algebra"))
}

pub fn system(f: Family, n: usize) -> RootSystem {
    system_of(algebra(f, n))
}

pub fn system_of(l: Arc<LieAlgebra>) -> RootSystem {
    let t = standard_cartan(l).expect("standard Cartan subalgebra");
    let rs = root_decomposition(&t, DecompositionOptions::default()).expect("root decomposition");
    choose_positive(&rs, PositiveChoice::Auto { seed: 0 }).expect("positive roots")
}

pub fn random_coords(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Random element of unit trace norm.
pub fn random_unit(l: &LieAlgebra, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let x = random_coords(l.dim(), rng);
    let n = l.norm(&x);
    x.iter().map(|v| v / n).collect()
}

pub fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Whether two lists of vectors agree as multisets within `tol`.
pub fn same_vector_set(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        match (0..b.len()).find(|&j| !used[j] && max_dist(x, &b[j]) < tol) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Matrices of `X ↦ P X P⁻¹` on the Cartan coordinates of `su(n)`, one per
/// permutation matrix `P`.
pub fn su_permutation_oracle(rs: &RootSystem, n: usize) -> Vec<DMatrix<f64>> {
    let hs = rs.cartan().matrices();
    let r = hs.len();
    let diag = |m: &ComplexMatrix| -> Vec<f64> { (0..n).map(|i| m[(i, i)].im).collect() };
    permutations(n)
        .into_iter()
        .map(|p| {
            DMatrix::from_fn(r, r, |k, l| {
                let moved: Vec<f64> = (0..n).map(|i| diag(&hs[l])[p[i]]).collect();
                dot(&diag(&hs[k]), &moved)
            })
        })
        .collect()
}

/// All `2^k k!` signed permutation matrices of size `k`.
pub fn signed_permutations(k: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::new();
    for p in permutations(k) {
        for signs in 0..(1u32 << k) {
            out.push(DMatrix::from_fn(k, k, |i, j| {
                if p[i] == j {
                    if signs & (1 << i) != 0 {
                        -1.0
                    } else {
                        1.0
                    }
                } else {
                    0.0
                }
            }));
        }
    }
    out
}

/// Roots `±(θ*_i − θ*_j)` of `su(n)` as functionals on the given Cartan basis,
/// with `θ_i(H) = Im H_ii`.
pub fn su_analytic_roots(rs: &RootSystem, n: usize) -> Vec<Vec<f64>> {
    let hs = rs.cartan().matrices();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(hs.iter().map(|h| h[(i, i)].im - h[(j, j)].im).collect());
            }
        }
    }
    out
}

/// Roots `±θ*_i`, `±θ*_i ± θ*_j` in θ-coordinates.
pub fn b_analytic_roots(k: usize) -> Vec<Vec<f64>> {
    let unit = |i: usize, s: f64| -> Vec<f64> { (0..k).map(|m| if m == i { s } else { 0.0 }).collect() };
    let mut out = Vec::new();
    for i in 0..k {
        out.push(unit(i, 1.0));
        out.push(unit(i, -1.0));
        for j in i + 1..k {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut v = unit(i, si);
                v[j] = sj;
                out.push(v);
            }
        }
    }
    out
}

/// Largest relative error between the analytic shape operator `−α(N)/α(Z)`
/// and a central-difference derivative of the equivariant normal field
/// `Ad(h)Z ↦ Ad(h)N`, at the orbit point `Ad(g)Z` with `g = exp(ξ₀)`.
pub fn fd_shape_error(rs: &RootSystem, z: &[f64], n: &[f64], xi0: &[f64], step: f64) -> f64 {
    let l = rs.algebra();
    let t = rs.cartan();
    let g = exp_element(l, xi0).expect("exp");
    let ad_g = |x: &[f64]| adjoint_action(l, &g, x).expect("Ad");
    let p = ad_g(&t.embed(z));
    let normal = ad_g(&t.embed(n));
    let moved_t: Vec<Vec<f64>> = t.basis().iter().map(|h| ad_g(h)).collect();
    let mut worst: f64 = 0.0;
    for &i in rs.positive() {
        let root = rs.root(i);
        let kappa = -root.value(n) / root.value(z);
        for xi in [&root.e1, &root.e2] {
            let eta = ad_g(xi);
            let tangent = l.bracket(&eta, &p);
            let at = |s: f64| -> Vec<f64> {
                let scaled: Vec<f64> = eta.iter().map(|v| v * s).collect();
                let h = exp_element(l, &scaled).expect("exp");
                adjoint_action(l, &h, &normal).expect("Ad")
            };
            let (plus, minus) = (at(step), at(-step));
            let mut dn: Vec<f64> = plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * step)).collect();
            // Tangential part: remove the component along Ad(g)t.
            for h in &moved_t {
                let c = l.inner(&dn, h);
                for (d, hv) in dn.iter_mut().zip(h) {
                    *d -= c * hv;
                }
            }
            let s_fd: Vec<f64> = dn.iter().map(|v| -v).collect();
            let diff: Vec<f64> = s_fd.iter().zip(&tangent).map(|(a, b)| a - kappa * b).collect();
            worst = worst.max(l.norm(&diff) / l.norm(&tangent));
        }
    }
    worst
}
