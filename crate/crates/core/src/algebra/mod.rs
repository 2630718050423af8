//! Real matrix Lie algebras: construction, structure constants, the Killing
//! form and the structural tests built on it.

mod classical;
mod ideals;

use std::sync::OnceLock;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::Serialize;

pub use classical::{satisfies_constraints, Family};
pub use ideals::{center, split_simple_ideals};

use crate::error::{LieError, Result};
use crate::numlin::real::{rank, RANK_TOL};
use crate::numlin::{commutator, herm_eig, real_inner, ComplexMatrix};

/// Closure tolerance for structure constants.
pub const CLOSURE_TOL: f64 = 1e-10;

/// Dense structure constants `C[i][j][k]` with `[X_i, X_j] = Σ_k C[i][j][k] X_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dim + j) * self.dim + k]
    }

    /// Stores `C[i][j][k] = v` and `C[j][i][k] = -v`.
    fn set_pair(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let d = self.dim;
        self.data[(i * d + j) * d + k] = v;
        self.data[(j * d + i) * d + k] = -v;
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                let w = xi * yj;
                if w == 0.0 || i == j {
                    continue;
                }
                let row = &self.data[(i * d + j) * d..(i * d + j + 1) * d];
                for (o, &c) in out.iter_mut().zip(row) {
                    *o += w * c;
                }
            }
        }
        out
    }

    /// Matrix of `ad(x)` acting on coordinates: `ad(x)_{kj} = Σ_i x_i C[i][j][k]`.
    pub fn ad_matrix(&self, x: &[f64]) -> DMatrix<f64> {
        let d = self.dim;
        let mut m = DMatrix::zeros(d, d);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for j in 0..d {
                let row = &self.data[(i * d + j) * d..(i * d + j + 1) * d];
                for (k, &c) in row.iter().enumerate() {
                    m[(k, j)] += xi * c;
                }
            }
        }
        m
    }

    /// Largest violation of the Jacobi identity over all basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim;
        let e = |i: usize| {
            let mut v = vec![0.0; d];
            v[i] = 1.0;
            v
        };
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in a + 1..d {
                let ab = self.bracket(&e(a), &e(b));
                for c in b + 1..d {
                    let bc = self.bracket(&e(b), &e(c));
                    let ca = self.bracket(&e(c), &e(a));
                    let t1 = self.bracket(&ab, &e(c));
                    let t2 = self.bracket(&bc, &e(a));
                    let t3 = self.bracket(&ca, &e(b));
                    for k in 0..d {
                        worst = worst.max((t1[k] + t2[k] + t3[k]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest `|C[i][j][k] + C[j][i][k]|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst.max((self.get(i, j, k) + self.get(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Nonzero entries with `i < j`.
    pub fn sparse_triplets(&self) -> Vec<(usize, usize, usize, f64)> {
        let d = self.dim;
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for k in 0..d {
                    let v = self.get(i, j, k);
                    if v != 0.0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }
}

/// Counts of positive, zero and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

/// Symmetric bilinear form in a basis, with its spectrum.
#[derive(Debug, Clone)]
pub struct BilinearFormMatrix {
    pub entries: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    pub signature: Signature,
}

impl BilinearFormMatrix {
    /// Relative threshold below which an eigenvalue counts as zero.
    pub const ZERO_TOL: f64 = 1e-9;

    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let d = entries.nrows();
        if entries.ncols() != d {
            return Err(LieError::dim("square form", format!("{}x{}", d, entries.ncols())));
        }
        let sym = (&entries - entries.transpose()).norm();
        if sym > 1e-12 * (1.0 + entries.norm()) {
            return Err(LieError::NotHermitian { residual: sym });
        }
        let entries = (&entries + entries.transpose()) * 0.5;
        let as_complex = ComplexMatrix::from_real(d, d, entries.transpose().as_slice())?;
        let eigenvalues = herm_eig(&as_complex)?.eigenvalues;
        let scale = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let cut = Self::ZERO_TOL * scale;
        let mut signature = Signature {
            positive: 0,
            zero: 0,
            negative: 0,
        };
        for &v in &eigenvalues {
            if scale == 0.0 || v.abs() <= cut {
                signature.zero += 1;
            } else if v > 0.0 {
                signature.positive += 1;
            } else {
                signature.negative += 1;
            }
        }
        Ok(Self {
            entries,
            eigenvalues,
            signature,
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `xᵀ B y`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let d = self.dim();
        let mut s = 0.0;
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                s += x[i] * self.entries[(i, j)] * y[j];
            }
        }
        s
    }
}

/// A finite-dimensional real Lie algebra of `n x n` complex matrices.
#[derive(Debug)]
pub struct LieAlgebra {
    name: String,
    ambient_size: usize,
    basis: Vec<ComplexMatrix>,
    structure: StructureConstants,
    /// Gram matrix of the trace metric in this basis.
    metric: DMatrix<f64>,
    frobenius: Option<Cholesky<f64, Dyn>>,
    classical: Option<(Family, usize)>,
    torus: Option<Vec<ComplexMatrix>>,
    killing: OnceLock<BilinearFormMatrix>,
}

impl Clone for LieAlgebra {
    fn clone(&self) -> Self {
        let killing = OnceLock::new();
        if let Some(k) = self.killing.get() {
            let _ = killing.set(k.clone());
        }
        Self {
            name: self.name.clone(),
            ambient_size: self.ambient_size,
            basis: self.basis.clone(),
            structure: self.structure.clone(),
            metric: self.metric.clone(),
            frobenius: self.frobenius.clone(),
            classical: self.classical,
            torus: self.torus.clone(),
            killing,
        }
    }
}

impl LieAlgebra {
    /// Algebra spanned by `basis`, with the Frobenius metric.
    pub fn from_basis(name: impl Into<String>, ambient_size: usize, basis: Vec<ComplexMatrix>) -> Result<Self> {
        Self::assemble(name.into(), ambient_size, basis, None, None, None, None)
    }

    /// Algebra spanned by `basis` with an explicit metric Gram matrix.
    pub fn from_basis_with_metric(
        name: impl Into<String>,
        ambient_size: usize,
        basis: Vec<ComplexMatrix>,
        metric: DMatrix<f64>,
    ) -> Result<Self> {
        Self::assemble(name.into(), ambient_size, basis, Some(metric), None, None, None)
    }

    /// The zero algebra on `n x n` matrices.
    pub fn zero(ambient_size: usize) -> Self {
        Self::assemble("0".into(), ambient_size, Vec::new(), None, None, None, Some(Vec::new()))
            .expect("empty basis is always valid")
    }

    /// Abelian algebra of imaginary diagonal `n x n` matrices.
    pub fn diagonal_torus(n: usize) -> Self {
        let basis = (0..n)
            .map(|k| ComplexMatrix::unit(n, k, k, num_complex::Complex64::new(0.0, 1.0)))
            .collect::<Vec<_>>();
        let torus = basis.clone();
        Self::assemble(format!("t({n})"), n, basis, None, None, None, Some(torus))
            .expect("diagonal basis is independent and closed")
    }

    fn assemble(
        name: String,
        ambient_size: usize,
        basis: Vec<ComplexMatrix>,
        metric: Option<DMatrix<f64>>,
        structure: Option<StructureConstants>,
        classical: Option<(Family, usize)>,
        torus: Option<Vec<ComplexMatrix>>,
    ) -> Result<Self> {
        let d = basis.len();
        for b in &basis {
            if b.rows() != ambient_size || b.cols() != ambient_size {
                return Err(LieError::dim(
                    format!("{ambient_size}x{ambient_size}"),
                    format!("{}x{}", b.rows(), b.cols()),
                ));
            }
        }
        let gram = DMatrix::from_fn(d, d, |i, j| real_inner(&basis[i], &basis[j]));
        if d > 0 && rank(&gram, RANK_TOL) < d {
            return Err(LieError::Construction("basis matrices are linearly dependent".into()));
        }
        let frobenius = if d > 0 {
            Some(
                Cholesky::new(gram.clone())
                    .ok_or_else(|| LieError::Construction("Gram matrix is not positive definite".into()))?,
            )
        } else {
            None
        };
        let metric = match metric {
            Some(m) => {
                if m.nrows() != d || m.ncols() != d {
                    return Err(LieError::dim(format!("{d}x{d} metric"), format!("{}x{}", m.nrows(), m.ncols())));
                }
                m
            }
            None => gram,
        };
        let mut alg = Self {
            name,
            ambient_size,
            basis,
            structure: StructureConstants::zeros(d),
            metric,
            frobenius,
            classical,
            torus,
            killing: OnceLock::new(),
        };
        alg.structure = match structure {
            Some(s) => s,
            None => structure_constants(&alg)?,
        };
        Ok(alg)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_size(&self) -> usize {
        self.ambient_size
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.structure
    }

    /// Gram matrix of the trace metric.
    pub fn metric(&self) -> &DMatrix<f64> {
        &self.metric
    }

    pub fn classical(&self) -> Option<(Family, usize)> {
        self.classical
    }

    pub(crate) fn torus_generators(&self) -> Option<&[ComplexMatrix]> {
        self.torus.as_deref()
    }

    /// `Σ x_i X_i`.
    pub fn element(&self, coords: &[f64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.ambient_size, self.ambient_size);
        for (c, b) in coords.iter().zip(&self.basis) {
            if *c != 0.0 {
                m.axpy(*c, b);
            }
        }
        m
    }

    /// Least-squares coordinates of `m` and the residual of the fit.
    pub fn project(&self, m: &ComplexMatrix) -> Result<(Vec<f64>, f64)> {
        if m.rows() != self.ambient_size || m.cols() != self.ambient_size {
            return Err(LieError::dim(
                format!("{0}x{0}", self.ambient_size),
                format!("{}x{}", m.rows(), m.cols()),
            ));
        }
        let Some(chol) = &self.frobenius else {
            return Ok((Vec::new(), m.norm_fro()));
        };
        let rhs = DVector::from_iterator(self.dim(), self.basis.iter().map(|b| real_inner(b, m)));
        let coords: Vec<f64> = chol.solve(&rhs).iter().cloned().collect();
        let residual = (m - &self.element(&coords)).norm_fro();
        Ok((coords, residual))
    }

    /// Coordinates of `m`, rejecting matrices farther than `tol` (relative) from the span.
    pub fn coordinates(&self, m: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
        let (coords, residual) = self.project(m)?;
        if residual > tol * (1.0 + m.norm_fro()) {
            return Err(LieError::Membership { residual });
        }
        Ok(coords)
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.structure.bracket(x, y)
    }

    /// Trace-metric inner product of coordinate vectors.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let d = self.dim();
        let mut s = 0.0;
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                s += x[i] * self.metric[(i, j)] * y[j];
            }
        }
        s
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    /// Cached Killing form.
    pub fn killing(&self) -> &BilinearFormMatrix {
        self.killing.get_or_init(|| {
            killing_matrix(&self.structure)
        })
    }

    /// Matrices `ad(X_i)` for every basis element.
    pub fn ad_basis(&self) -> Vec<DMatrix<f64>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut e = vec![0.0; d];
                e[i] = 1.0;
                self.structure.ad_matrix(&e)
            })
            .collect()
    }

    pub fn to_json(&self) -> LieAlgebraJson {
        let sig = self.killing().signature;
        LieAlgebraJson {
            name: self.name.clone(),
            ambient_size: self.ambient_size,
            dim: self.dim(),
            basis: self
                .basis
                .iter()
                .map(|b| b.entries().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            structure_constants: self.structure.sparse_triplets(),
            killing_signature: [sig.positive, sig.zero, sig.negative],
        }
    }
}

/// JSON view of a [`LieAlgebra`].
#[derive(Debug, Clone, Serialize)]
pub struct LieAlgebraJson {
    pub name: String,
    pub ambient_size: usize,
    pub dim: usize,
    /// Row-major entries `[re, im]` per basis matrix.
    pub basis: Vec<Vec<[f64; 2]>>,
    /// `(i, j, k, C[i][j][k])` for `i < j`.
    pub structure_constants: Vec<(usize, usize, usize, f64)>,
    /// `[positive, zero, negative]`.
    pub killing_signature: [usize; 3],
}

fn killing_matrix(sc: &StructureConstants) -> BilinearFormMatrix {
    let d = sc.dim();
    // ad(X_i)_{kl} = C[i][l][k]; B_ij = Σ_{k,l} ad_i[k][l] ad_j[l][k]
    let mut b = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut s = 0.0;
            for l in 0..d {
                for k in 0..d {
                    let a = sc.get(i, l, k);
                    if a != 0.0 {
                        s += a * sc.get(j, k, l);
                    }
                }
            }
            b[(i, j)] = s;
            b[(j, i)] = s;
        }
    }
    BilinearFormMatrix::new(b).expect("Killing matrix is symmetric by construction")
}

/// Standard basis of a classical family.
pub fn build_classical(family: Family, n: usize) -> Result<LieAlgebra> {
    if n < family.min_n() {
        return Err(LieError::Construction(format!(
            "{} needs n >= {}, got {n}",
            family.short_name(),
            family.min_n()
        )));
    }
    let basis = classical::standard_basis(family, n);
    debug_assert_eq!(basis.len(), family.dimension(n));
    let ambient = family.ambient_size(n);
    let w = family.metric_weight();
    let metric = DMatrix::from_fn(basis.len(), basis.len(), |i, j| w * real_inner(&basis[i], &basis[j]));
    LieAlgebra::assemble(
        family.label(n),
        ambient,
        basis,
        Some(metric),
        None,
        Some((family, n)),
        classical::torus_generators(family, n),
    )
}

/// Block-diagonal direct sum.
pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> Result<LieAlgebra> {
    let na = a.ambient_size();
    let nb = b.ambient_size();
    let za = ComplexMatrix::zeros(na, na);
    let zb = ComplexMatrix::zeros(nb, nb);
    let mut basis: Vec<ComplexMatrix> = a.basis().iter().map(|x| x.block_diag(&zb)).collect();
    basis.extend(b.basis().iter().map(|y| za.block_diag(y)));

    let (da, db) = (a.dim(), b.dim());
    let d = da + db;
    let mut sc = StructureConstants::zeros(d);
    for (src, off) in [(a.structure(), 0usize), (b.structure(), da)] {
        let m = src.dim();
        for i in 0..m {
            for j in i + 1..m {
                for k in 0..m {
                    let v = src.get(i, j, k);
                    if v != 0.0 {
                        sc.set_pair(i + off, j + off, k + off, v);
                    }
                }
            }
        }
    }
    let mut metric = DMatrix::zeros(d, d);
    metric.view_mut((0, 0), (da, da)).copy_from(a.metric());
    metric.view_mut((da, da), (db, db)).copy_from(b.metric());

    let torus = match (a.torus_generators(), b.torus_generators()) {
        (Some(ta), Some(tb)) => {
            let mut t: Vec<ComplexMatrix> = ta.iter().map(|x| x.block_diag(&zb)).collect();
            t.extend(tb.iter().map(|y| za.block_diag(y)));
            Some(t)
        }
        _ => None,
    };
    let name = match (da, db) {
        (_, 0) => a.name().to_string(),
        (0, _) => b.name().to_string(),
        _ => format!("{}+{}", a.name(), b.name()),
    };
    let classical = match (da, db) {
        (_, 0) if nb == 0 => a.classical(),
        (0, _) if na == 0 => b.classical(),
        _ => None,
    };
    LieAlgebra::assemble(name, na + nb, basis, Some(metric), Some(sc), classical, torus)
}

/// Projects every bracket of basis elements back onto the basis.
pub fn structure_constants(l: &LieAlgebra) -> Result<StructureConstants> {
    let d = l.dim();
    let mut sc = StructureConstants::zeros(d);
    let mut worst = (0usize, 0usize, 0.0f64);
    for i in 0..d {
        for j in i + 1..d {
            let comm = commutator(&l.basis[i], &l.basis[j])?;
            let scale = comm.norm_fro();
            if scale == 0.0 {
                continue;
            }
            let (coords, residual) = l.project(&comm)?;
            let rel = residual / (1.0 + scale);
            if rel > worst.2 {
                worst = (i, j, rel);
            }
            for (k, c) in coords.into_iter().enumerate() {
                if c.abs() > 1e-14 * (1.0 + scale) {
                    sc.set_pair(i, j, k, c);
                }
            }
        }
    }
    if worst.2 > CLOSURE_TOL {
        return Err(LieError::Closure {
            i: worst.0,
            j: worst.1,
            residual: worst.2,
        });
    }
    Ok(sc)
}

/// `B_ij = tr(ad(X_i) ad(X_j))`.
pub fn killing_form(l: &LieAlgebra) -> &BilinearFormMatrix {
    l.killing()
}

/// Relative spectral threshold for nondegeneracy of the Killing form.
pub const SEMISIMPLE_TOL: f64 = 1e-8;

/// Nondegeneracy of the Killing form: the smallest eigenvalue magnitude must
/// exceed `SEMISIMPLE_TOL` times the largest.
pub fn is_semisimple(l: &LieAlgebra) -> bool {
    let ev = &l.killing().eigenvalues;
    let max = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = ev.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    !ev.is_empty() && max > 0.0 && min > SEMISIMPLE_TOL * max
}

/// Negative definiteness of the Killing form; requires semisimplicity.
pub fn is_compact_type(l: &LieAlgebra) -> Result<bool> {
    if !is_semisimple(l) {
        return Err(LieError::Precondition(format!("{} is not semisimple", l.name())));
    }
    let ev = &l.killing().eigenvalues;
    let max = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(ev.iter().all(|&v| v < -BilinearFormMatrix::ZERO_TOL * max))
}
