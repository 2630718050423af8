//! Geometry of a bi-invariant metric at the identity (connection, curvature,
//! Ricci, Einstein constant) and the extrinsic geometry of adjoint orbits in
//! the flat algebra: shape operators and parallel orbits.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adjoint::{adjoint_action, exp_element};
use crate::algebra::{split_simple_ideals, Family, LieAlgebra};
use crate::cartan::{stabilizer_algebra, vanishing_roots, RootSystem};
use crate::error::{LieError, Result};
use crate::numlin::{herm_eig, ComplexMatrix};
use crate::weyl::{to_fundamental_domain, WeylGroup};

/// Allowed `|⟨[X,Y],Z⟩ + ⟨Y,[X,Z]⟩|` (relative) for a bi-invariant metric.
pub const AD_SKEW_TOL: f64 = 1e-9;

/// Agreement required between the two Ricci evaluations.
pub const RICCI_TOL: f64 = 1e-8;

/// Allowed spread of the Ricci quotients of an Einstein metric.
pub const EINSTEIN_TOL: f64 = 1e-8;

/// Agreement of canonical forms in the parallel-orbit check.
pub const CANONICAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    TraceForm,
    MinusKilling,
    Custom,
}

/// An ad-invariant inner product on a Lie algebra.
#[derive(Debug, Clone)]
pub struct BiInvariantMetric {
    algebra: Arc<LieAlgebra>,
    gram: DMatrix<f64>,
    /// `L⁻ᵀ` for `gram = LLᵀ`: its columns are an orthonormal basis.
    frame: DMatrix<f64>,
    kind: MetricKind,
}

impl BiInvariantMetric {
    /// The trace metric the algebra was built with.
    pub fn trace_form(l: Arc<LieAlgebra>) -> Result<Self> {
        let gram = l.metric().clone();
        Self::new(l, gram, MetricKind::TraceForm)
    }

    /// `−B`, for algebras of compact type.
    pub fn minus_killing(l: Arc<LieAlgebra>) -> Result<Self> {
        let gram = -&l.killing().entries;
        Self::new(l, gram, MetricKind::MinusKilling)
    }

    pub fn custom(l: Arc<LieAlgebra>, gram: DMatrix<f64>) -> Result<Self> {
        Self::new(l, gram, MetricKind::Custom)
    }

    fn new(algebra: Arc<LieAlgebra>, gram: DMatrix<f64>, kind: MetricKind) -> Result<Self> {
        let d = algebra.dim();
        if gram.nrows() != d || gram.ncols() != d {
            return Err(LieError::dim(format!("{d}x{d}"), format!("{}x{}", gram.nrows(), gram.ncols())));
        }
        let gram = (&gram + gram.transpose()) * 0.5;
        let eig = gram.clone().symmetric_eigenvalues();
        let max = eig.iter().cloned().fold(0.0_f64, |m, v| m.max(v.abs()));
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        if d > 0 && min <= 1e-10 * max.max(f64::MIN_POSITIVE) {
            return Err(LieError::Precondition("metric is not positive definite".into()));
        }
        for ad in algebra.ad_basis() {
            let skew = &gram * &ad + ad.transpose() * &gram;
            if skew.norm() > AD_SKEW_TOL * (1.0 + gram.norm() * ad.norm()) {
                return Err(LieError::Precondition(format!(
                    "metric is not ad-invariant (residual {:.3e})",
                    skew.norm()
                )));
            }
        }
        let frame = match gram.clone().cholesky() {
            Some(c) => c.l().try_inverse().ok_or(LieError::Singular)?.transpose(),
            None if d == 0 => DMatrix::zeros(0, 0),
            None => return Err(LieError::Precondition("metric is not positive definite".into())),
        };
        Ok(Self {
            algebra,
            gram,
            frame,
            kind,
        })
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let d = self.algebra.dim();
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                s += x[i] * self.gram[(i, j)] * y[j];
            }
        }
        s
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    /// Orthonormal basis, as coordinate vectors.
    pub fn orthonormal_basis(&self) -> Vec<Vec<f64>> {
        self.frame.column_iter().map(|c| c.iter().cloned().collect()).collect()
    }
}

fn scaled(x: &[f64], s: f64) -> Vec<f64> {
    x.iter().map(|v| v * s).collect()
}

/// `∇_X Y = ½[X,Y]`.
pub fn levi_civita(m: &BiInvariantMetric, x: &[f64], y: &[f64]) -> Vec<f64> {
    scaled(&m.algebra.bracket(x, y), 0.5)
}

/// `R(X,Y)Z = ¼[[X,Y],Z]`.
pub fn curvature_tensor(m: &BiInvariantMetric, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
    let l = &m.algebra;
    scaled(&l.bracket(&l.bracket(x, y), z), 0.25)
}

/// `⟨R(X,Y)Z, W⟩`.
pub fn curvature_form(m: &BiInvariantMetric, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
    m.inner(&curvature_tensor(m, x, y, z), w)
}

/// Sectional curvature of the plane spanned by `x` and `y`.
pub fn sectional(m: &BiInvariantMetric, x: &[f64], y: &[f64]) -> Result<f64> {
    let (xx, yy, xy) = (m.inner(x, x), m.inner(y, y), m.inner(x, y));
    let area = xx * yy - xy * xy;
    if area <= 1e-12 * xx * yy || area <= 0.0 {
        return Err(LieError::DegeneratePlane { area });
    }
    Ok(curvature_form(m, x, y, x, y) / area)
}

/// `Ric(X,Y) = Σ ⟨R(X,e_i)Y, e_i⟩`, checked against `−¼B(X,Y)`.
pub fn ricci(m: &BiInvariantMetric, x: &[f64], y: &[f64]) -> Result<f64> {
    if m.kind == MetricKind::Custom {
        return Err(LieError::Precondition(
            "Ricci curvature is only evaluated for the trace form and −B".into(),
        ));
    }
    let value: f64 = m
        .orthonormal_basis()
        .iter()
        .map(|e| curvature_form(m, x, e, y, e))
        .sum();
    let expected = -0.25 * m.algebra.killing().eval(x, y);
    let scale = 1.0 + m.algebra.killing().entries.norm() * m.norm(x) * m.norm(y);
    if (value - expected).abs() > RICCI_TOL * scale {
        return Err(LieError::Consistency(format!(
            "Ricci trace {value} disagrees with −B/4 = {expected}"
        )));
    }
    Ok(value)
}

/// `λ` with `Ric = λ⟨·,·⟩`, for a simple algebra.
pub fn einstein_constant(m: &BiInvariantMetric) -> Result<f64> {
    let l = &m.algebra;
    let ideals = split_simple_ideals(l)?;
    if ideals.len() != 1 {
        return Err(LieError::Precondition(format!(
            "{} is not simple ({} ideals)",
            l.name(),
            ideals.len()
        )));
    }
    let basis = m.orthonormal_basis();
    let d = basis.len();
    let mut ric = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let v = ricci(m, &basis[i], &basis[j])?;
            ric[(i, j)] = v;
            ric[(j, i)] = v;
        }
    }
    let lambda = ric.diagonal().mean();
    let deviation = (ric - DMatrix::<f64>::identity(d, d) * lambda).abs().max();
    if deviation > EINSTEIN_TOL * (1.0 + lambda.abs()) {
        return Err(LieError::EinsteinFailure { deviation });
    }
    Ok(lambda)
}

/// Principal curvature `−α(N)/α(Z)` on the root plane `V_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalCurvature {
    pub root: usize,
    pub value: f64,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
}

/// Shape operator of the orbit `Ad(G)Z` at `Z` in the normal direction `N`.
#[derive(Debug, Clone)]
pub struct OrbitShape {
    pub z: Vec<f64>,
    pub n: Vec<f64>,
    pub curvatures: Vec<PrincipalCurvature>,
}

impl OrbitShape {
    /// `S_N(v)` for `v` tangent to the orbit at `Z`.
    pub fn apply(&self, m: &BiInvariantMetric, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for pc in &self.curvatures {
            let n2 = m.inner(&pc.e1, &pc.e1);
            let c1 = pc.value * m.inner(v, &pc.e1) / n2;
            let c2 = pc.value * m.inner(v, &pc.e2) / n2;
            for k in 0..v.len() {
                out[k] += c1 * pc.e1[k] + c2 * pc.e2[k];
            }
        }
        out
    }
}

fn require_regular(rs: &RootSystem, z: &[f64]) -> Result<()> {
    if z.len() != rs.rank() {
        return Err(LieError::dim(rs.rank(), z.len()));
    }
    let vanishing = vanishing_roots(rs, z);
    if vanishing.is_empty() {
        Ok(())
    } else {
        Err(LieError::Regularity { vanishing })
    }
}

/// Principal curvatures of the regular orbit through `Z ∈ t` (Cartan
/// coordinates) in the normal direction `N ∈ t`.
pub fn orbit_shape_operator(rs: &RootSystem, z: &[f64], n: &[f64]) -> Result<OrbitShape> {
    require_regular(rs, z)?;
    if n.len() != rs.rank() {
        return Err(LieError::dim(rs.rank(), n.len()));
    }
    let curvatures = rs
        .pair_representatives()
        .into_iter()
        .map(|i| {
            let root = rs.root(i);
            PrincipalCurvature {
                root: i,
                value: -root.value(n) / root.value(z),
                e1: root.e1.clone(),
                e2: root.e2.clone(),
            }
        })
        .collect();
    Ok(OrbitShape {
        z: z.to_vec(),
        n: n.to_vec(),
        curvatures,
    })
}

/// Pfaffian of a real skew-symmetric matrix by pivoted elimination.
pub fn pfaffian(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut a = a.clone();
    let mut pf = 1.0;
    let mut k = 0;
    while k + 1 < n {
        let (kp, _) = (k + 1..n).fold((k + 1, -1.0), |best, j| {
            if a[(k, j)].abs() > best.1 {
                (j, a[(k, j)].abs())
            } else {
                best
            }
        });
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        if pivot == 0.0 {
            return 0.0;
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|j| a[(j, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}

/// Cartan coordinates of an element of `t` conjugate to `y` (algebra
/// coordinates), read off from the spectrum of `iY` for the classical families.
///
/// The result is defined up to the Weyl group; pass it through
/// [`to_fundamental_domain`] for a unique representative.
pub fn conjugate_into_cartan(rs: &RootSystem, y: &[f64]) -> Result<Vec<f64>> {
    let l = rs.algebra();
    let (family, size) = l
        .classical()
        .ok_or_else(|| LieError::CanonicalForm(format!("no spectral normal form for {}", l.name())))?;
    let ym = l.element(y);
    let iy = ym.scale_c(Complex64::new(0.0, 1.0));
    let iy = (&iy + &iy.adjoint()).scale(0.5);
    let spectrum = herm_eig(&iy)?.eigenvalues;
    let n = ym.rows();
    let i = Complex64::new(0.0, 1.0);
    let d = match family {
        Family::Su | Family::U => {
            // iY v = λ v  ⇔  Y v = −iλ v.
            let diag: Vec<Complex64> = spectrum.iter().map(|&lam| -i * lam).collect();
            ComplexMatrix::diag(&diag)
        }
        Family::So => {
            let m = size / 2;
            let mut theta: Vec<f64> = spectrum.iter().rev().take(m).cloned().collect();
            if size % 2 == 0 && m > 0 {
                let real = DMatrix::from_fn(n, n, |r, c| ym[(r, c)].re);
                if pfaffian(&real) < 0.0 {
                    theta[m - 1] = -theta[m - 1];
                }
            }
            let mut dm = ComplexMatrix::zeros(n, n);
            for (k, t) in theta.iter().enumerate() {
                dm[(2 * k, 2 * k + 1)] = Complex64::new(*t, 0.0);
                dm[(2 * k + 1, 2 * k)] = Complex64::new(-*t, 0.0);
            }
            dm
        }
        Family::Sp => {
            let theta: Vec<f64> = spectrum.iter().rev().take(size).cloned().collect();
            let mut diag = vec![Complex64::new(0.0, 0.0); 2 * size];
            for (k, t) in theta.iter().enumerate() {
                diag[k] = i * *t;
                diag[size + k] = -i * *t;
            }
            ComplexMatrix::diag(&diag)
        }
        _ => {
            return Err(LieError::CanonicalForm(format!(
                "{} is not a compact family",
                l.name()
            )))
        }
    };
    let coords = l
        .coordinates(&d, 1e-9)
        .map_err(|_| LieError::CanonicalForm("normal form escapes the algebra".into()))?;
    let (h, distance) = rs.cartan().project(&coords);
    if distance > 1e-8 * (1.0 + l.norm(y)) {
        return Err(LieError::CanonicalForm(format!(
            "normal form lies {distance:.3e} away from the Cartan subalgebra"
        )));
    }
    Ok(h)
}

/// Outcome of [`parallel_orbit_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelOrbitReport {
    pub passed: bool,
    pub samples: usize,
    /// Representative of `Z + N` in the closed fundamental chamber.
    pub canonical: Vec<f64>,
    /// Largest distance between a sampled canonical form and `canonical`.
    pub max_deviation: f64,
    pub orbit_dim_z: usize,
    pub orbit_dim_z_plus_n: usize,
    /// First sample that could not be canonicalised, with the reason.
    pub failure: Option<String>,
}

impl ParallelOrbitReport {
    pub fn dimension_drop(&self) -> Option<(usize, usize)> {
        (self.orbit_dim_z_plus_n < self.orbit_dim_z).then_some((self.orbit_dim_z, self.orbit_dim_z_plus_n))
    }
}

/// Checks that `Ad(g)Z + Ad(g)N` stays in the single orbit of `Z + N` for
/// random `g = exp(ξ)`.
pub fn parallel_orbit_check(
    rs: &RootSystem,
    w: &WeylGroup,
    z: &[f64],
    n: &[f64],
    samples: usize,
    seed: u64,
) -> Result<ParallelOrbitReport> {
    require_regular(rs, z)?;
    if n.len() != rs.rank() {
        return Err(LieError::dim(rs.rank(), n.len()));
    }
    let l = rs.algebra();
    let t = rs.cartan();
    let zn: Vec<f64> = z.iter().zip(n).map(|(a, b)| a + b).collect();
    let (canonical, _) = to_fundamental_domain(rs, w, &zn)?;
    let tol = CANONICAL_TOL * (1.0 + zn.iter().map(|v| v * v).sum::<f64>().sqrt());
    let z_alg = t.embed(z);
    let n_alg = t.embed(n);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation: f64 = 0.0;
    let mut failure = None;
    for s in 0..samples {
        let xi: Vec<f64> = (0..l.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g = exp_element(l, &xi)?;
        let y: Vec<f64> = adjoint_action(l, &g, &z_alg)?
            .iter()
            .zip(adjoint_action(l, &g, &n_alg)?)
            .map(|(a, b)| a + b)
            .collect();
        let h = match conjugate_into_cartan(rs, &y) {
            Ok(h) => h,
            Err(e) => {
                failure = Some(format!("sample {s}: {e}"));
                break;
            }
        };
        let (can, _) = to_fundamental_domain(rs, w, &h)?;
        let dev = can.iter().zip(&canonical).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        max_deviation = max_deviation.max(dev);
    }
    Ok(ParallelOrbitReport {
        passed: failure.is_none() && max_deviation <= tol,
        samples,
        canonical,
        max_deviation,
        orbit_dim_z: stabilizer_algebra(rs, z).orbit_dim,
        orbit_dim_z_plus_n: stabilizer_algebra(rs, &zn).orbit_dim,
        failure,
    })
}

/// Serialized orbit report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReportJson {
    #[serde(rename = "Z")]
    pub z: Vec<f64>,
    #[serde(rename = "N")]
    pub n: Vec<f64>,
    pub canonical_z_plus_n: Vec<f64>,
    pub orbit_dim: usize,
    pub orbit_dim_z_plus_n: usize,
    pub principal_curvatures: Vec<PrincipalCurvatureJson>,
    pub parallel_orbit: ParallelOrbitReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalCurvatureJson {
    pub root: Vec<f64>,
    pub value: f64,
    pub multiplicity: usize,
}

impl OrbitReportJson {
    pub fn new(rs: &RootSystem, shape: &OrbitShape, check: &ParallelOrbitReport) -> Self {
        Self {
            z: shape.z.clone(),
            n: shape.n.clone(),
            canonical_z_plus_n: check.canonical.clone(),
            orbit_dim: check.orbit_dim_z,
            orbit_dim_z_plus_n: check.orbit_dim_z_plus_n,
            principal_curvatures: shape
                .curvatures
                .iter()
                .map(|pc| PrincipalCurvatureJson {
                    root: rs.root(pc.root).coords.clone(),
                    value: pc.value,
                    multiplicity: 2,
                })
                .collect(),
            parallel_orbit: check.clone(),
        }
    }
}
