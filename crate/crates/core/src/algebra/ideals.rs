use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_compact_type, LieAlgebra};
use crate::error::{LieError, Result};
use crate::numlin::real::{columns, complement, inner, null_space, orthonormalize, RANK_TOL};

const SPLIT_SEED: u64 = 0x1dea1;

/// Orthonormal (trace metric) basis of the center, as coordinate vectors.
pub fn center(l: &LieAlgebra) -> Vec<Vec<f64>> {
    let d = l.dim();
    if d == 0 {
        return Vec::new();
    }
    // Row (j, k), column i holds C[i][j][k]: x is central iff the stack kills it.
    let sc = l.structure();
    let mut stacked = DMatrix::zeros(d * d, d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                stacked[(j * d + k, i)] = sc.get(i, j, k);
            }
        }
    }
    let kernel = null_space(&stacked, RANK_TOL);
    orthonormalize(kernel, l.metric(), 1e-9)
        .into_iter()
        .map(|v| v.iter().cloned().collect())
        .collect()
}

/// Smallest ideal containing `seed`: the span closed under every `ad(X_i)`.
fn grow_ideal(seed: Vec<DVector<f64>>, ads: &[DMatrix<f64>], metric: &DMatrix<f64>) -> Result<Vec<DVector<f64>>> {
    let d = metric.nrows();
    let mut span = orthonormalize(seed, metric, 1e-8);
    for _ in 0..=d {
        let images: Vec<DVector<f64>> = span.iter().flat_map(|v| ads.iter().map(move |ad| ad * v)).collect();
        // Brackets that vanish exactly come back as rounding noise; drop them.
        let floor = 1e-9 * images.iter().map(|w| w.norm()).fold(0.0, f64::max);
        let mut candidates = span.clone();
        candidates.extend(images.into_iter().filter(|w| w.norm() > floor));
        let next = orthonormalize(candidates, metric, 1e-8);
        if next.len() == span.len() {
            return Ok(next);
        }
        span = next;
    }
    Err(LieError::Internal("ideal growth did not stabilise".into()))
}

/// Splits a compact semisimple algebra into its simple ideals.
///
/// Each ideal is seeded with a root vector: the top eigenvector of `-ad(H)^2`
/// for a random `H` in the not-yet-split part. A root plane sits inside a
/// single simple ideal, so closing it under `ad` yields that ideal and nothing
/// more. The remaining part is the Killing-orthogonal complement.
pub fn split_simple_ideals(l: &LieAlgebra) -> Result<Vec<LieAlgebra>> {
    if !matches!(is_compact_type(l), Ok(true)) {
        return Err(LieError::Precondition(format!(
            "{} is not of compact type",
            l.name()
        )));
    }
    let d = l.dim();
    let neg_killing = -&l.killing().entries;
    let ads = l.ad_basis();
    let unit = |i: usize| DVector::from_fn(d, |k, _| if k == i { 1.0 } else { 0.0 });
    let mut remaining = orthonormalize((0..d).map(unit), &neg_killing, 1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut ideals: Vec<Vec<DVector<f64>>> = Vec::new();

    while !remaining.is_empty() {
        let q = columns(&remaining, d);
        let h: DVector<f64> = &q * DVector::from_fn(remaining.len(), |_, _| rng.gen_range(-1.0..1.0));
        let ad_h = l.structure().ad_matrix(h.as_slice());
        // Restriction to the remaining ideal, skew in the -B orthonormal frame.
        let restricted = q.transpose() * &neg_killing * &ad_h * &q;
        let sym = -(&restricted * &restricted);
        let sym = (&sym + sym.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let (top, top_val) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        if top_val <= 1e-12 {
            return Err(LieError::Internal("remaining part is abelian".into()));
        }
        let seed = &q * eig.eigenvectors.column(top);
        let ideal = grow_ideal(vec![seed], &ads, &neg_killing)?;
        for v in &ideal {
            if grow_ideal(vec![v.clone()], &ads, &neg_killing)?.len() != ideal.len() {
                return Err(LieError::Internal("grown ideal is not simple".into()));
            }
        }
        remaining = complement(&ideal, &remaining, &neg_killing);
        ideals.push(ideal);
    }

    // Order by dimension, then by the first basis direction each ideal touches.
    let lead = |ideal: &Vec<DVector<f64>>| {
        (0..d)
            .find(|&i| ideal.iter().any(|v| inner(&neg_killing, v, &unit(i)).abs() > 1e-8))
            .unwrap_or(d)
    };
    ideals.sort_by_key(|ideal| (ideal.len(), lead(ideal)));

    ideals
        .into_iter()
        .enumerate()
        .map(|(idx, vectors)| {
            let vectors = orthonormalize(vectors, l.metric(), 1e-9);
            let basis = vectors.iter().map(|v| l.element(v.as_slice())).collect();
            let coords = columns(&vectors, d);
            let metric = coords.transpose() * l.metric() * &coords;
            LieAlgebra::from_basis_with_metric(format!("{}[{idx}]", l.name()), l.ambient_size(), basis, metric)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_classical, direct_sum, Family};
    use crate::numlin::ComplexMatrix;

    #[test]
    fn center_of_su_is_trivial() {
        for n in 2..=4 {
            assert!(center(&build_classical(Family::Su, n).unwrap()).is_empty());
        }
    }

    #[test]
    fn center_of_u_is_scalar_line() {
        for n in 2..=3 {
            let u = build_classical(Family::U, n).unwrap();
            let z = center(&u);
            assert_eq!(z.len(), 1);
            let m = u.element(&z[0]);
            let scalar = m[(0, 0)];
            assert!(scalar.re.abs() < 1e-12 && scalar.im.abs() > 0.1);
            assert!((&m - &ComplexMatrix::identity(n).scale_c(scalar)).norm_fro() < 1e-12);
            // Central elements are killed by every ad(X_i).
            for ad in u.ad_basis() {
                let v = DVector::from_vec(z[0].clone());
                assert!((ad * v).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn center_of_abelian_is_everything() {
        let t = LieAlgebra::diagonal_torus(3);
        assert_eq!(center(&t).len(), 3);
    }

    #[test]
    fn split_of_direct_sum() {
        let s = direct_sum(
            &build_classical(Family::Su, 2).unwrap(),
            &build_classical(Family::Su, 3).unwrap(),
        )
        .unwrap();
        let ideals = split_simple_ideals(&s).unwrap();
        let dims: Vec<usize> = ideals.iter().map(|i| i.dim()).collect();
        assert_eq!(dims, vec![3, 8]);
    }

    #[test]
    fn so4_splits_into_two_so3() {
        let so4 = build_classical(Family::So, 4).unwrap();
        let ideals = split_simple_ideals(&so4).unwrap();
        assert_eq!(ideals.len(), 2);
        assert!(ideals.iter().all(|i| i.dim() == 3));
        // The two ideals commute.
        for x in ideals[0].basis() {
            for y in ideals[1].basis() {
                let c = &(x * y) - &(y * x);
                assert!(c.norm_fro() < 1e-10);
            }
        }
    }

    #[test]
    fn su4_is_simple() {
        let su4 = build_classical(Family::Su, 4).unwrap();
        let ideals = split_simple_ideals(&su4).unwrap();
        assert_eq!(ideals.len(), 1);
        assert_eq!(ideals[0].dim(), 15);
    }

    #[test]
    fn killing_restricts_to_ideals() {
        let so4 = build_classical(Family::So, 4).unwrap();
        let b = &so4.killing().entries;
        for ideal in split_simple_ideals(&so4).unwrap() {
            let coords: Vec<Vec<f64>> = ideal
                .basis()
                .iter()
                .map(|m| so4.coordinates(m, 1e-10).unwrap())
                .collect();
            let k = ideal.dim();
            for i in 0..k {
                for j in 0..k {
                    let restricted = (DVector::from_vec(coords[i].clone()).transpose() * b * DVector::from_vec(coords[j].clone()))[(0, 0)];
                    let intrinsic = ideal.killing().entries[(i, j)];
                    assert!((restricted - intrinsic).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn split_requires_compact_type() {
        assert!(split_simple_ideals(&build_classical(Family::U, 2).unwrap()).is_err());
        assert!(split_simple_ideals(&build_classical(Family::SlR, 2).unwrap()).is_err());
    }

    #[test]
    fn semisimple_iff_no_center_on_samples() {
        for (f, n) in [(Family::Su, 3), (Family::U, 3), (Family::So, 4), (Family::Sp, 2)] {
            let l = build_classical(f, n).unwrap();
            if !center(&l).is_empty() {
                assert!(!crate::algebra::is_semisimple(&l));
            }
        }
    }
}
