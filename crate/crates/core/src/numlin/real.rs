//! Real coordinate-space helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value threshold for rank and null-space decisions.
pub const RANK_TOL: f64 = 1e-9;

/// Orthonormal basis (Euclidean) of the null space of `m`.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    let padded;
    let work = if m.nrows() < cols {
        padded = {
            let mut p = DMatrix::zeros(cols, cols);
            p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
            p
        };
        &padded
    } else {
        m
    };
    let svd = work.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = rel_tol * sigma_max;
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| sigma_max == 0.0 || s <= cutoff)
        .map(|(k, _)| v_t.row(k).transpose())
        .collect()
}

/// Numerical rank with the relative singular-value threshold.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let sigma_max = sv.iter().cloned().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * sigma_max).count()
}

/// `<u, v>_G = uᵀ G v`.
pub fn inner(gram: &DMatrix<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    (u.transpose() * gram * v)[(0, 0)]
}

/// Modified Gram–Schmidt in the metric `gram`; vectors whose residual norm
/// drops below `rel_tol` of their original norm are discarded.
pub fn orthonormalize(
    vectors: impl IntoIterator<Item = DVector<f64>>,
    gram: &DMatrix<f64>,
    rel_tol: f64,
) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let norm0 = inner(gram, &v, &v).max(0.0).sqrt();
        if norm0 == 0.0 {
            continue;
        }
        let mut w = v;
        // two passes keep the result orthogonal to working precision
        for _ in 0..2 {
            for q in &out {
                let c = inner(gram, q, &w);
                w -= q * c;
            }
        }
        let norm = inner(gram, &w, &w).max(0.0).sqrt();
        if norm > rel_tol * norm0 {
            out.push(w / norm);
        }
    }
    out
}

/// Orthogonal complement of `sub` inside `span(within)`, both orthonormal in `gram`.
pub fn complement(
    sub: &[DVector<f64>],
    within: &[DVector<f64>],
    gram: &DMatrix<f64>,
) -> Vec<DVector<f64>> {
    let target = within.len().saturating_sub(sub.len());
    let mut basis: Vec<DVector<f64>> = sub.to_vec();
    let start = basis.len();
    for v in within {
        if basis.len() - start == target {
            break;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = inner(gram, q, &w);
                w -= q * c;
            }
        }
        let norm = inner(gram, &w, &w).max(0.0).sqrt();
        if norm > 1e-6 {
            basis.push(w / norm);
        }
    }
    basis.split_off(start)
}

/// Columns as a matrix.
pub fn columns(vectors: &[DVector<f64>], dim: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space(&m, RANK_TOL);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((m.clone() * v).norm() < 1e-14);
        }
    }

    #[test]
    fn rank_of_dependent_columns() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        assert_eq!(rank(&m, RANK_TOL), 2);
        assert_eq!(rank(&DMatrix::zeros(2, 2), RANK_TOL), 0);
    }

    #[test]
    fn gram_schmidt_in_weighted_metric() {
        let g = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0]));
        let out = orthonormalize(
            vec![DVector::from_vec(vec![1.0, 1.0]), DVector::from_vec(vec![1.0, 0.0]), DVector::from_vec(vec![3.0, 1.0])],
            &g,
            1e-9,
        );
        assert_eq!(out.len(), 2);
        assert!((inner(&g, &out[0], &out[1])).abs() < 1e-14);
        assert!((inner(&g, &out[1], &out[1]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complement_fills_the_rest() {
        let g = DMatrix::identity(3, 3);
        let within: Vec<_> = (0..3).map(|i| DVector::from_fn(3, |k, _| if k == i { 1.0 } else { 0.0 })).collect();
        let sub = vec![DVector::from_vec(vec![1.0, 1.0, 0.0]) / 2f64.sqrt()];
        let c = complement(&sub, &within, &g);
        assert_eq!(c.len(), 2);
        for v in &c {
            assert!(inner(&g, v, &sub[0]).abs() < 1e-14);
        }
    }
}
