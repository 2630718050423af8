//! Cartan subalgebras and the root decomposition of a compact semisimple
//! algebra: roots, root planes, positive and simple roots, coroots.

use std::cmp::Ordering;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{is_compact_type, LieAlgebra};
use crate::error::{LieError, Result};
use crate::numlin::real::{null_space, orthonormalize, RANK_TOL};
use crate::numlin::{herm_eig, ComplexMatrix};

/// Bracket norm below which two Cartan candidates are said to commute.
pub const ABELIAN_TOL: f64 = 1e-9;

/// Relative threshold `|α(X)| > REGULAR_TOL · ‖α‖ ‖X‖` for regular elements.
pub const REGULAR_TOL: f64 = 1e-8;

/// Tolerance when matching root vectors against sums of other roots.
pub const ROOT_MATCH_TOL: f64 = 1e-8;

/// Distance to the nearest integer allowed in simple-root expansions.
pub const INTEGRALITY_TOL: f64 = 1e-6;

const CENTRALIZER_ATTEMPTS: usize = 8;

/// A maximal abelian subalgebra, with a basis orthonormal in the trace metric.
#[derive(Debug, Clone)]
pub struct CartanSubalgebra {
    algebra: Arc<LieAlgebra>,
    basis: Vec<Vec<f64>>,
}

impl CartanSubalgebra {
    fn new(algebra: Arc<LieAlgebra>, spanning: Vec<DVector<f64>>) -> Self {
        let basis = orthonormalize(spanning, algebra.metric(), RANK_TOL)
            .into_iter()
            .map(|v| v.iter().cloned().collect())
            .collect();
        Self { algebra, basis }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Basis `H_1..H_r` as algebra coordinates.
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Basis `H_1..H_r` as matrices.
    pub fn matrices(&self) -> Vec<ComplexMatrix> {
        self.basis.iter().map(|h| self.algebra.element(h)).collect()
    }

    /// Algebra coordinates of `Σ h_k H_k`.
    pub fn embed(&self, h: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.algebra.dim()];
        for (hk, basis) in h.iter().zip(&self.basis) {
            for (o, b) in out.iter_mut().zip(basis) {
                *o += hk * b;
            }
        }
        out
    }

    /// Cartan coordinates of the orthogonal projection of `x` onto `t`, and
    /// the trace-norm distance from `x` to `t`.
    pub fn project(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let h: Vec<f64> = self.basis.iter().map(|b| self.algebra.inner(b, x)).collect();
        let back = self.embed(&h);
        let diff: Vec<f64> = x.iter().zip(&back).map(|(a, b)| a - b).collect();
        (h, self.algebra.norm(&diff))
    }

    /// Largest bracket norm between basis elements.
    pub fn abelian_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                worst = worst.max(self.algebra.norm(&self.algebra.bracket(a, b)));
            }
        }
        worst
    }
}

/// The textbook Cartan subalgebra of a classical compact family (or a direct
/// sum of such): imaginary diagonals for `su` and `u`, rotation blocks for `so`,
/// conjugate diagonal pairs for `sp`.
pub fn standard_cartan(l: Arc<LieAlgebra>) -> Result<CartanSubalgebra> {
    let torus = l
        .torus_generators()
        .ok_or_else(|| LieError::Construction(format!("{} has no standard Cartan subalgebra", l.name())))?;
    let coords = torus
        .iter()
        .map(|m| l.coordinates(m, 1e-10).map(DVector::from_vec))
        .collect::<Result<Vec<_>>>()?;
    Ok(CartanSubalgebra::new(l, coords))
}

/// `ker ad(X)` for a generic `X`.
///
/// `x` is tried first when given; afterwards up to eight random elements are
/// drawn from `seed` until the kernel is abelian.
pub fn centralizer_cartan(l: Arc<LieAlgebra>, x: Option<&[f64]>, seed: u64) -> Result<CartanSubalgebra> {
    let d = l.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let given = x.map(|v| v.to_vec());
    for attempt in 0..=CENTRALIZER_ATTEMPTS {
        let candidate = match (&given, attempt) {
            (Some(v), 0) => v.clone(),
            (None, 0) => continue,
            _ => (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        };
        let kernel = null_space(&l.structure().ad_matrix(&candidate), RANK_TOL);
        let t = CartanSubalgebra::new(l.clone(), kernel);
        let residual = t.abelian_residual();
        if residual <= ABELIAN_TOL {
            return Ok(t);
        }
        worst = worst.min(residual);
    }
    Err(LieError::Genericity { bracket_norm: worst })
}

/// A root with its real root plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    /// `α̃` with `α(H) = ⟨α̃, h⟩` for `H = Σ h_k H_k`.
    pub coords: Vec<f64>,
    /// `[H, e1] = α(H) e2`, unit trace norm, algebra coordinates.
    pub e1: Vec<f64>,
    /// `[H, e2] = −α(H) e1`, unit trace norm, algebra coordinates.
    pub e2: Vec<f64>,
}

impl Root {
    pub fn value(&self, h: &[f64]) -> f64 {
        dot(&self.coords, h)
    }

    pub fn norm(&self) -> f64 {
        dot(&self.coords, &self.coords).sqrt()
    }
}

/// Roots of a compact semisimple algebra relative to a Cartan subalgebra.
#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan: CartanSubalgebra,
    roots: Vec<Root>,
    negatives: Vec<usize>,
    positive: Vec<usize>,
    simple: Vec<usize>,
    regular_element: Option<Vec<f64>>,
}

impl RootSystem {
    pub fn cartan(&self) -> &CartanSubalgebra {
        &self.cartan
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        self.cartan.algebra()
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, idx: usize) -> &Root {
        &self.roots[idx]
    }

    /// Index of `−α` for the root at `idx`.
    pub fn negative_of(&self, idx: usize) -> usize {
        self.negatives[idx]
    }

    /// Positive roots, empty until [`choose_positive`] has run.
    pub fn positive(&self) -> &[usize] {
        &self.positive
    }

    /// Simple roots, in the order used for Cartan matrices and Weyl words.
    pub fn simple(&self) -> &[usize] {
        &self.simple
    }

    pub fn regular_element(&self) -> Option<&[f64]> {
        self.regular_element.as_deref()
    }

    /// Simple root vectors in order.
    pub fn simple_vectors(&self) -> Vec<Vec<f64>> {
        self.simple.iter().map(|&i| self.roots[i].coords.clone()).collect()
    }

    /// One root from each `±` pair: the positive ones if chosen, otherwise
    /// the lexicographically larger of each pair.
    pub fn pair_representatives(&self) -> Vec<usize> {
        if !self.positive.is_empty() {
            return self.positive.clone();
        }
        (0..self.roots.len())
            .filter(|&i| lex_cmp(&self.roots[i].coords, &self.roots[self.negatives[i]].coords) == Ordering::Greater)
            .collect()
    }

    pub fn to_json(&self) -> RootSystemJson {
        RootSystemJson {
            rank: self.rank(),
            metric: "trace".into(),
            roots: self.roots.iter().map(|r| r.coords.clone()).collect(),
            positive: self.positive.clone(),
            simple: self.simple.clone(),
            coroots: self.positive.iter().map(|&i| coroot(self, i)).collect(),
            regular_element: self.regular_element.clone(),
        }
    }
}

/// Serialized root system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSystemJson {
    pub rank: usize,
    pub metric: String,
    pub roots: Vec<Vec<f64>>,
    pub positive: Vec<usize>,
    pub simple: Vec<usize>,
    pub coroots: Vec<Vec<f64>>,
    pub regular_element: Option<Vec<f64>>,
}

/// Knobs for [`root_decomposition`].
#[derive(Debug, Clone, Copy)]
pub struct DecompositionOptions {
    /// Two weights coincide when they differ by less than this in max norm
    /// (relative to the largest weight once it exceeds 1).
    pub cluster_tol: f64,
    /// Seed for the generic element of `t`.
    pub seed: u64,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        Self {
            cluster_tol: 1e-7,
            seed: 0,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > 1e-7 {
            return x.partial_cmp(y).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Simultaneous eigenspace decomposition of `ad(t)` on the complexified algebra.
pub fn root_decomposition(t: &CartanSubalgebra, opts: DecompositionOptions) -> Result<RootSystem> {
    let l = t.algebra().clone();
    if !matches!(is_compact_type(&l), Ok(true)) {
        return Err(LieError::Precondition(format!("{} is not compact semisimple", l.name())));
    }
    let d = l.dim();
    let r = t.rank();

    // In the frame y = Cᵀx with −B = CCᵀ every ad(H) is skew-symmetric.
    let neg_killing = -&l.killing().entries;
    let chol = neg_killing
        .clone()
        .cholesky()
        .ok_or_else(|| LieError::Internal("−B is not positive definite".into()))?;
    let c = chol.l();
    let c_inv_t = c
        .clone()
        .try_inverse()
        .ok_or(LieError::Singular)?
        .transpose();
    let skew: Vec<DMatrix<f64>> = t
        .basis()
        .iter()
        .map(|h| c.transpose() * l.structure().ad_matrix(h) * &c_inv_t)
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let coeffs: Vec<f64> = (0..r).map(|_| rng.gen_range(0.5..1.5)).collect();
    let mut gen = DMatrix::zeros(d, d);
    for (ck, a) in coeffs.iter().zip(&skew) {
        gen += a * *ck;
    }
    let herm = ComplexMatrix::from_fn(d, d, |i, j| Complex64::new(0.0, gen[(i, j)]));
    let eig = herm_eig(&herm)?;

    let complex_skew: Vec<ComplexMatrix> = skew
        .iter()
        .map(|a| ComplexMatrix::from_fn(d, d, |i, j| Complex64::new(a[(i, j)], 0.0)))
        .collect();
    let mut weights: Vec<Vec<f64>> = (0..d)
        .map(|k| {
            let u = eig.vector(k);
            let norm_sq: f64 = u.iter().map(|z| z.norm_sqr()).sum();
            complex_skew
                .iter()
                .map(|a| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..d {
                        let mut row = Complex64::new(0.0, 0.0);
                        for j in 0..d {
                            row += a[(i, j)] * u[j];
                        }
                        acc += u[i].conj() * row;
                    }
                    acc.im / norm_sq
                })
                .collect()
        })
        .collect();

    let scale = weights
        .iter()
        .map(|w| w.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
        .fold(1.0, f64::max);
    let tol = opts.cluster_tol * scale;
    // Components at rounding level are exact zeros.
    for v in weights.iter_mut().flatten() {
        if v.abs() < 1e-12 * scale {
            *v = 0.0;
        }
    }

    let zero: Vec<usize> = (0..d).filter(|&k| weights[k].iter().all(|v| v.abs() < tol)).collect();
    if zero.len() != r {
        return Err(LieError::Multiplicity {
            expected: r,
            found: zero.len(),
            weight: vec![0.0; r],
        });
    }

    let mut roots = Vec::with_capacity(d - r);
    for k in (0..d).filter(|k| !zero.contains(k)) {
        let twins = (0..d).filter(|&j| max_dist(&weights[j], &weights[k]) < tol).count();
        if twins != 1 {
            return Err(LieError::Multiplicity {
                expected: 1,
                found: twins,
                weight: weights[k].clone(),
            });
        }
        let u = DVector::from_iterator(d, eig.vector(k));
        // Back to algebra coordinates: x = C^{-T} y.
        let c_inv_t_c = c_inv_t.map(|v| Complex64::new(v, 0.0));
        let mut v = c_inv_t_c * u;
        let lead = v.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        let anchor = v
            .iter()
            .find(|z| z.norm() > 1e-6 * lead)
            .copied()
            .ok_or_else(|| LieError::Internal("zero weight vector".into()))?;
        let phase = anchor.conj() / anchor.norm();
        v *= phase;
        let e2: Vec<f64> = v.iter().map(|z| z.re).collect();
        let e1: Vec<f64> = v.iter().map(|z| z.im).collect();
        let (n1, n2) = (l.norm(&e1), l.norm(&e2));
        if n1 <= 1e-12 || n2 <= 1e-12 {
            return Err(LieError::Internal("degenerate root plane".into()));
        }
        roots.push(Root {
            coords: weights[k].clone(),
            e1: e1.iter().map(|x| x / n1).collect(),
            e2: e2.iter().map(|x| x / n2).collect(),
        });
    }
    roots.sort_by(|a, b| lex_cmp(&b.coords, &a.coords));

    let negatives = roots
        .iter()
        .map(|a| {
            let neg: Vec<f64> = a.coords.iter().map(|x| -x).collect();
            roots
                .iter()
                .position(|b| max_dist(&b.coords, &neg) < tol)
                .ok_or_else(|| LieError::Internal("root without its negative".into()))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(RootSystem {
        cartan: t.clone(),
        roots,
        negatives,
        positive: Vec::new(),
        simple: Vec::new(),
        regular_element: None,
    })
}

/// Indices of the roots vanishing on `x` (relative to `‖α‖‖x‖`).
pub fn vanishing_roots(rs: &RootSystem, x: &[f64]) -> Vec<usize> {
    let xn = dot(x, x).sqrt();
    (0..rs.roots.len())
        .filter(|&i| rs.roots[i].value(x).abs() <= REGULAR_TOL * rs.roots[i].norm() * xn)
        .collect()
}

/// Whether no root vanishes on `x`.
pub fn is_regular(rs: &RootSystem, x: &[f64]) -> bool {
    vanishing_roots(rs, x).is_empty()
}

/// How to pick the positive roots.
#[derive(Debug, Clone)]
pub enum PositiveChoice {
    /// `(r, r−1, …, 1)` in Cartan coordinates if regular, else random.
    Auto { seed: u64 },
    /// An explicit regular element of `t` in Cartan coordinates.
    Element(Vec<f64>),
}

/// Positive roots `{α : α(X) > 0}` for a regular `X`, plus the simple roots.
pub fn choose_positive(rs: &RootSystem, choice: PositiveChoice) -> Result<RootSystem> {
    let r = rs.rank();
    let x = match choice {
        PositiveChoice::Element(x) => {
            if x.len() != r {
                return Err(LieError::dim(r, x.len()));
            }
            let vanishing = vanishing_roots(rs, &x);
            if !vanishing.is_empty() {
                return Err(LieError::Regularity { vanishing });
            }
            x
        }
        PositiveChoice::Auto { seed } => {
            let staircase: Vec<f64> = (0..r).map(|k| (r - k) as f64).collect();
            if is_regular(rs, &staircase) {
                staircase
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut found = None;
                for _ in 0..64 {
                    let x: Vec<f64> = (0..r).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    if is_regular(rs, &x) {
                        found = Some(x);
                        break;
                    }
                }
                found.ok_or_else(|| LieError::Regularity { vanishing: Vec::new() })?
            }
        }
    };
    let mut out = rs.clone();
    out.positive = (0..rs.roots.len()).filter(|&i| rs.roots[i].value(&x) > 0.0).collect();
    out.regular_element = Some(x);
    out.simple = simple_roots(&out)?;
    Ok(out)
}

/// Positive roots that are not the sum of two positive roots, ordered
/// lexicographically from largest to smallest coordinate vector.
pub fn simple_roots(rs: &RootSystem) -> Result<Vec<usize>> {
    if rs.positive.is_empty() {
        return Err(LieError::SimpleRoots("no positive roots chosen".into()));
    }
    let pos = &rs.positive;
    let mut simple: Vec<usize> = pos
        .iter()
        .copied()
        .filter(|&a| {
            let target = &rs.roots[a].coords;
            !pos.iter().any(|&b| {
                pos.iter().any(|&c| {
                    let sum: Vec<f64> = rs.roots[b].coords.iter().zip(&rs.roots[c].coords).map(|(x, y)| x + y).collect();
                    max_dist(&sum, target) < ROOT_MATCH_TOL
                })
            })
        })
        .collect();
    simple.sort_by(|&a, &b| lex_cmp(&rs.roots[b].coords, &rs.roots[a].coords));
    if simple.len() != rs.rank() {
        return Err(LieError::SimpleRoots(format!(
            "found {} simple roots for rank {}",
            simple.len(),
            rs.rank()
        )));
    }
    let r = rs.rank();
    let basis = DMatrix::from_fn(r, r, |i, j| rs.roots[simple[j]].coords[i]);
    let lu = basis.clone().lu();
    for &p in pos {
        let target = DVector::from_vec(rs.roots[p].coords.clone());
        let coeffs = lu
            .solve(&target)
            .ok_or_else(|| LieError::SimpleRoots("simple roots are dependent".into()))?;
        let residual = (&basis * &coeffs - &target).norm();
        let off_integer = coeffs.iter().map(|c| (c - c.round()).abs()).fold(0.0, f64::max);
        let negative = coeffs.iter().any(|c| c.round() < 0.0);
        if residual > INTEGRALITY_TOL || off_integer > INTEGRALITY_TOL || negative {
            return Err(LieError::SimpleRoots(format!(
                "positive root {p} has non-integral or negative expansion {:?}",
                coeffs.as_slice()
            )));
        }
    }
    Ok(simple)
}

/// Integer coefficients of a root over the simple roots.
pub fn simple_expansion(rs: &RootSystem, idx: usize) -> Result<Vec<i64>> {
    let r = rs.rank();
    if rs.simple.len() != r {
        return Err(LieError::SimpleRoots("no simple roots chosen".into()));
    }
    let basis = DMatrix::from_fn(r, r, |i, j| rs.roots[rs.simple[j]].coords[i]);
    let coeffs = basis
        .lu()
        .solve(&DVector::from_vec(rs.roots[idx].coords.clone()))
        .ok_or_else(|| LieError::SimpleRoots("simple roots are dependent".into()))?;
    Ok(coeffs.iter().map(|c| c.round() as i64).collect())
}

/// `α∨ = 2α̃ / ⟨α̃, α̃⟩` in Cartan coordinates.
pub fn coroot(rs: &RootSystem, idx: usize) -> Vec<f64> {
    let a = &rs.roots[idx].coords;
    let n2 = dot(a, a);
    a.iter().map(|x| 2.0 * x / n2).collect()
}

/// The centralizer `g_X = t ⊕ Σ_{α(X)=0} V_α` of an element of `t`.
#[derive(Debug, Clone)]
pub struct Stabilizer {
    pub dim: usize,
    /// Algebra coordinates spanning `g_X`.
    pub basis: Vec<Vec<f64>>,
    /// `dim L − dim g_X`.
    pub orbit_dim: usize,
}

pub fn stabilizer_algebra(rs: &RootSystem, x: &[f64]) -> Stabilizer {
    let vanishing = vanishing_roots(rs, x);
    let mut basis: Vec<Vec<f64>> = rs.cartan.basis().to_vec();
    for i in rs.pair_representatives() {
        if vanishing.contains(&i) {
            basis.push(rs.roots[i].e1.clone());
            basis.push(rs.roots[i].e2.clone());
        }
    }
    let dim = basis.len();
    Stabilizer {
        dim,
        basis,
        orbit_dim: rs.algebra().dim() - dim,
    }
}
