use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::LieError;
use crate::numlin::ComplexMatrix;

/// Classical matrix Lie algebra families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    GlR,
    GlC,
    SlR,
    SlC,
    So,
    Su,
    U,
    Sp,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::GlR,
        Family::GlC,
        Family::SlR,
        Family::SlC,
        Family::So,
        Family::Su,
        Family::U,
        Family::Sp,
    ];

    /// Real dimension of the family member with parameter `n`.
    pub fn dimension(self, n: usize) -> usize {
        match self {
            Family::GlR => n * n,
            Family::GlC => 2 * n * n,
            Family::SlR => n * n - 1,
            Family::SlC => 2 * (n * n - 1),
            Family::So => n * (n - 1) / 2,
            Family::Su => n * n - 1,
            Family::U => n * n,
            Family::Sp => n * (2 * n + 1),
        }
    }

    pub(crate) fn min_n(self) -> usize {
        match self {
            Family::SlR | Family::SlC | Family::Su | Family::So => 2,
            _ => 1,
        }
    }

    /// Size of the matrices realising the family member with parameter `n`.
    pub fn ambient_size(self, n: usize) -> usize {
        match self {
            Family::Sp => 2 * n,
            _ => n,
        }
    }

    /// Weight `w` in the trace metric `w · Re tr(XY*)`.
    ///
    /// Orthogonal and symplectic torus coordinates `θ_k` live in 2x2 blocks
    /// (resp. conjugate diagonal pairs), so the factor 1/2 makes them
    /// orthonormal, like the diagonal coordinates of `su(n)` are at weight 1.
    pub fn metric_weight(self) -> f64 {
        match self {
            Family::So | Family::Sp => 0.5,
            _ => 1.0,
        }
    }

    pub fn is_compact(self) -> bool {
        matches!(self, Family::So | Family::Su | Family::U | Family::Sp)
    }

    pub fn label(self, n: usize) -> String {
        match self {
            Family::GlR => format!("gl({n},R)"),
            Family::GlC => format!("gl({n},C)"),
            Family::SlR => format!("sl({n},R)"),
            Family::SlC => format!("sl({n},C)"),
            Family::So => format!("so({n})"),
            Family::Su => format!("su({n})"),
            Family::U => format!("u({n})"),
            Family::Sp => format!("sp({n})"),
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Family::GlR => "gl_r",
            Family::GlC => "gl_c",
            Family::SlR => "sl_r",
            Family::SlC => "sl_c",
            Family::So => "so",
            Family::Su => "su",
            Family::U => "u",
            Family::Sp => "sp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Family {
    type Err = LieError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.short_name() == s)
            .ok_or_else(|| LieError::Construction(format!("unknown family '{s}'")))
    }
}

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn unit(n: usize, i: usize, j: usize, z: Complex64) -> ComplexMatrix {
    ComplexMatrix::unit(n, i, j, z)
}

fn pair(n: usize, i: usize, j: usize, a: Complex64, b: Complex64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(i, j)] = a;
    m[(j, i)] = b;
    m
}

fn diag_difference(n: usize, k: usize, z: Complex64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(k, k)] = z;
    m[(k + 1, k + 1)] = -z;
    m
}

/// Skew-Hermitian off-diagonal generators `E_ij - E_ji`, `i(E_ij + E_ji)`.
fn skew_hermitian_offdiag(n: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(pair(n, i, j, ONE, -ONE));
            out.push(pair(n, i, j, I, I));
        }
    }
    out
}

/// Embeds the quaternionic matrix `A + Bj` as `[[A, -conj(B)], [B, conj(A)]]`.
fn quaternionic(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut m = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[(i, j)];
            m[(i, n + j)] = -b[(i, j)].conj();
            m[(n + i, j)] = b[(i, j)];
            m[(n + i, n + j)] = a[(i, j)].conj();
        }
    }
    m
}

/// Standard real basis of the family member.
pub(crate) fn standard_basis(family: Family, n: usize) -> Vec<ComplexMatrix> {
    match family {
        Family::GlR => (0..n)
            .flat_map(|i| (0..n).map(move |j| unit(n, i, j, ONE)))
            .collect(),
        Family::GlC => (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| [unit(n, i, j, ONE), unit(n, i, j, I)]))
            .collect(),
        Family::SlR => sl_basis(n, ONE),
        Family::SlC => {
            let mut out = sl_basis(n, ONE);
            out.extend(sl_basis(n, I));
            out
        }
        Family::So => (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| pair(n, i, j, ONE, -ONE)))
            .collect(),
        Family::Su => {
            let mut out = skew_hermitian_offdiag(n);
            out.extend((0..n - 1).map(|k| diag_difference(n, k, I)));
            out
        }
        Family::U => {
            let mut out = skew_hermitian_offdiag(n);
            out.extend((0..n).map(|k| unit(n, k, k, I)));
            out
        }
        Family::Sp => {
            let zero = ComplexMatrix::zeros(n, n);
            let mut out: Vec<ComplexMatrix> = standard_basis(Family::U, n)
                .iter()
                .map(|a| quaternionic(a, &zero))
                .collect();
            // B ranges over complex symmetric matrices.
            for i in 0..n {
                for j in i..n {
                    for z in [ONE, I] {
                        let b = if i == j { unit(n, i, i, z) } else { pair(n, i, j, z, z) };
                        out.push(quaternionic(&zero, &b));
                    }
                }
            }
            out
        }
    }
}

fn sl_basis(n: usize, z: Complex64) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| unit(n, i, j, z)))
        .collect();
    out.extend((0..n - 1).map(|k| diag_difference(n, k, z)));
    out
}

/// Generators of the textbook maximal abelian subalgebra, when the family is compact.
pub(crate) fn torus_generators(family: Family, n: usize) -> Option<Vec<ComplexMatrix>> {
    match family {
        Family::Su => Some((0..n - 1).map(|k| diag_difference(n, k, I)).collect()),
        Family::U => Some((0..n).map(|k| unit(n, k, k, I)).collect()),
        Family::So => Some((0..n / 2).map(|k| pair(n, 2 * k, 2 * k + 1, ONE, -ONE)).collect()),
        Family::Sp => {
            let zero = ComplexMatrix::zeros(n, n);
            Some((0..n).map(|k| quaternionic(&unit(n, k, k, I), &zero)).collect())
        }
        _ => None,
    }
}

/// Whether `x` satisfies the defining linear constraints of the family.
pub fn satisfies_constraints(family: Family, x: &ComplexMatrix, tol: f64) -> bool {
    let n = x.rows();
    let is_real = x.entries().iter().all(|z| z.im.abs() <= tol);
    let skew_herm = (&x.adjoint() + x).norm_fro() <= tol;
    let traceless = x.trace().norm() <= tol;
    match family {
        Family::GlR => is_real,
        Family::GlC => true,
        Family::SlR => is_real && traceless,
        Family::SlC => traceless,
        Family::So => is_real && (&x.transpose() + x).norm_fro() <= tol,
        Family::Su => skew_herm && traceless,
        Family::U => skew_herm,
        Family::Sp => {
            // X* + X = 0 and Xᵀ J + J X = 0 with J = [[0, I], [-I, 0]].
            let half = n / 2;
            let j = ComplexMatrix::from_fn(n, n, |r, c| {
                if c == r + half && r < half {
                    ONE
                } else if r == c + half && c < half {
                    -ONE
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            let sympl = &(&x.transpose() * &j) + &(&j * x);
            n.is_multiple_of(2) && skew_herm && sympl.norm_fro() <= tol
        }
    }
}
