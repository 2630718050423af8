//! The exponential map, the adjoint representations `Ad` and `ad` in a chosen
//! basis, and numerical order checks of the Campbell formulas.

use nalgebra::DMatrix;

use crate::algebra::LieAlgebra;
use crate::error::{LieError, Result};
use crate::numlin::{mat_exp, mat_log_principal, ComplexMatrix};

/// Relative residual allowed when mapping a conjugated matrix back to coordinates.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Residual below which a Campbell remainder is treated as identically zero.
pub const EXACT_TOL: f64 = 1e-10;

/// What an [`AdOperator`] was built from.
#[derive(Debug, Clone)]
pub enum AdSource {
    Group(ComplexMatrix),
    Algebra(Vec<f64>),
}

/// A `d x d` real matrix acting on coordinates in the algebra's basis.
#[derive(Debug, Clone)]
pub struct AdOperator {
    pub matrix: DMatrix<f64>,
    pub source: AdSource,
}

impl AdOperator {
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        let d = self.matrix.nrows();
        (0..d)
            .map(|k| (0..d).map(|j| self.matrix[(k, j)] * y[j]).sum())
            .collect()
    }
}

/// `exp(Σ x_i X_i)` in the ambient matrix group.
pub fn exp_element(l: &LieAlgebra, x: &[f64]) -> Result<ComplexMatrix> {
    mat_exp(&l.element(x))
}

/// Coordinates of `g X g⁻¹`.
pub fn adjoint_action(l: &LieAlgebra, g: &ComplexMatrix, x: &[f64]) -> Result<Vec<f64>> {
    let g_inv = g.inverse()?;
    conjugate(l, g, &g_inv, x)
}

fn conjugate(l: &LieAlgebra, g: &ComplexMatrix, g_inv: &ComplexMatrix, x: &[f64]) -> Result<Vec<f64>> {
    let m = l.element(x);
    let image = &(g * &m) * g_inv;
    l.coordinates(&image, MEMBERSHIP_TOL)
}

/// Matrix of `Ad(g)` on the algebra.
pub fn adjoint_group_operator(l: &LieAlgebra, g: &ComplexMatrix) -> Result<AdOperator> {
    let d = l.dim();
    let g_inv = g.inverse()?;
    let mut matrix = DMatrix::zeros(d, d);
    for j in 0..d {
        let mut e = vec![0.0; d];
        e[j] = 1.0;
        let col = conjugate(l, g, &g_inv, &e)?;
        for (k, v) in col.into_iter().enumerate() {
            matrix[(k, j)] = v;
        }
    }
    Ok(AdOperator {
        matrix,
        source: AdSource::Group(g.clone()),
    })
}

/// `ad(X)` from the structure constants.
pub fn ad_operator(l: &LieAlgebra, x: &[f64]) -> AdOperator {
    AdOperator {
        matrix: l.structure().ad_matrix(x),
        source: AdSource::Algebra(x.to_vec()),
    }
}

/// Exponential of a real square matrix through the complex kernel.
pub fn mat_exp_real(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let row_major: Vec<f64> = a.transpose().as_slice().to_vec();
    let e = mat_exp(&ComplexMatrix::from_real(n, a.ncols(), &row_major)?)?;
    Ok(DMatrix::from_fn(n, n, |i, j| e[(i, j)].re))
}

/// `‖Ad(exp X) − exp(ad X)‖_F`.
pub fn check_ad_exp(l: &LieAlgebra, x: &[f64]) -> Result<f64> {
    let g = exp_element(l, x)?;
    let lhs = adjoint_group_operator(l, &g)?.matrix;
    let rhs = mat_exp_real(&ad_operator(l, x).matrix)?;
    Ok((lhs - rhs).norm())
}

/// Truncation order of the product formula `exp(tX)exp(tY) = exp(T(t) + …)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BchOrder {
    /// `T = t(X + Y)`
    First,
    /// `T = t(X + Y) + t²/2 [X, Y]`
    Second,
}

/// The three Campbell identities checked to second order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CampbellFormula {
    /// `exp(tX)exp(tY)` against `t(X+Y) + t²/2 [X,Y]`
    Product,
    /// `exp(tX)exp(tY)exp(−tX)` against `tY + t²[X,Y]`
    Conjugation,
    /// `exp(−tX)exp(−tY)exp(tX)exp(tY)` against `t²[X,Y]`
    Commutator,
}

/// Outcome of a log-log fit of a Campbell remainder.
#[derive(Debug, Clone, PartialEq)]
pub enum OrderEstimate {
    /// The remainder vanishes on the whole grid (commuting inputs).
    Exact { max_residual: f64 },
    /// Least-squares slope of `log E(t)` against `log t`.
    Slope { slope: f64, samples: Vec<(f64, f64)> },
}

impl OrderEstimate {
    pub fn slope(&self) -> Option<f64> {
        match self {
            OrderEstimate::Exact { .. } => None,
            OrderEstimate::Slope { slope, .. } => Some(*slope),
        }
    }
}

const GRID_POINTS: usize = 9;

fn log_grid(hi: f64, lo: f64) -> Vec<f64> {
    let (a, b) = (hi.ln(), lo.ln());
    (0..GRID_POINTS)
        .map(|k| (a + (b - a) * k as f64 / (GRID_POINTS - 1) as f64).exp())
        .collect()
}

struct CampbellData {
    x: ComplexMatrix,
    y: ComplexMatrix,
    bracket: ComplexMatrix,
}

impl CampbellData {
    fn new(l: &LieAlgebra, x: &[f64], y: &[f64]) -> Self {
        let xm = l.element(x);
        let ym = l.element(y);
        let bracket = &(&xm * &ym) - &(&ym * &xm);
        Self { x: xm, y: ym, bracket }
    }

    fn product(&self, formula: CampbellFormula, t: f64) -> Result<ComplexMatrix> {
        let ex = mat_exp(&self.x.scale(t))?;
        let ey = mat_exp(&self.y.scale(t))?;
        Ok(match formula {
            CampbellFormula::Product => &ex * &ey,
            CampbellFormula::Conjugation => &(&ex * &ey) * &mat_exp(&self.x.scale(-t))?,
            CampbellFormula::Commutator => {
                let emx = mat_exp(&self.x.scale(-t))?;
                let emy = mat_exp(&self.y.scale(-t))?;
                &(&(&emx * &emy) * &ex) * &ey
            }
        })
    }

    fn target(&self, formula: CampbellFormula, order: BchOrder, t: f64) -> ComplexMatrix {
        match formula {
            CampbellFormula::Product => {
                let mut m = (&self.x + &self.y).scale(t);
                if order == BchOrder::Second {
                    m.axpy(0.5 * t * t, &self.bracket);
                }
                m
            }
            CampbellFormula::Conjugation => {
                let mut m = self.y.scale(t);
                m.axpy(t * t, &self.bracket);
                m
            }
            CampbellFormula::Commutator => self.bracket.scale(t * t),
        }
    }

    fn residual(&self, formula: CampbellFormula, order: BchOrder, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        let log = mat_log_principal(&self.product(formula, t)?)?;
        Ok((&log - &self.target(formula, order, t)).norm_fro())
    }
}

fn fit_slope(samples: &[(f64, f64)]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(_, e)| *e > 1e2 * f64::EPSILON)
        .map(|&(t, e)| (t.ln(), e.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(LieError::Internal("too few points above the noise floor".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

fn estimate(l: &LieAlgebra, x: &[f64], y: &[f64], formula: CampbellFormula, order: BchOrder) -> Result<OrderEstimate> {
    let data = CampbellData::new(l, x, y);
    let run = |grid: Vec<f64>| -> Result<Vec<(f64, f64)>> {
        grid.into_iter()
            .map(|t| data.residual(formula, order, t).map(|e| (t, e)))
            .collect()
    };
    let samples = match run(log_grid(1e-1, 1e-3)) {
        Err(LieError::Branch) => run(log_grid(1e-2, 1e-4))?,
        other => other?,
    };
    let max_residual = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    if max_residual < EXACT_TOL {
        return Ok(OrderEstimate::Exact { max_residual });
    }
    let slope = fit_slope(&samples)?;
    Ok(OrderEstimate::Slope { slope, samples })
}

/// Log-log slope of the remainder of the first Campbell formula truncated at `order`.
pub fn bch_order_estimate(l: &LieAlgebra, x: &[f64], y: &[f64], order: BchOrder) -> Result<OrderEstimate> {
    estimate(l, x, y, CampbellFormula::Product, order)
}

/// Log-log slope of the remainder of any of the three Campbell formulas.
pub fn campbell_order_estimate(
    l: &LieAlgebra,
    x: &[f64],
    y: &[f64],
    formula: CampbellFormula,
) -> Result<OrderEstimate> {
    estimate(l, x, y, formula, BchOrder::Second)
}

/// Residuals at a single `t` of the conjugation and commutator formulas.
pub fn conjugation_triple_check(l: &LieAlgebra, x: &[f64], y: &[f64], t: f64) -> Result<(f64, f64)> {
    let data = CampbellData::new(l, x, y);
    Ok((
        data.residual(CampbellFormula::Conjugation, BchOrder::Second, t)?,
        data.residual(CampbellFormula::Commutator, BchOrder::Second, t)?,
    ))
}
