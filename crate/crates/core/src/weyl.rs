//! Root reflections, the Weyl group they generate, Weyl chambers and the
//! canonical representative of a Weyl orbit in the closed fundamental chamber.

use std::collections::{HashMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cartan::{coroot, vanishing_roots, RootSystem};
use crate::error::{LieError, Result};

/// Grid used to deduplicate Weyl matrices.
pub const DEDUP_GRID: f64 = 1e-7;

/// Safety cap on the group order.
pub const MAX_ORDER: usize = 2_000_000;

/// Values above `−CHAMBER_TOL` count as nonnegative for the closed chamber.
pub const CHAMBER_TOL: f64 = 1e-10;

/// An element of the Weyl group acting on Cartan coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylElement {
    pub matrix: DMatrix<f64>,
    /// Simple-reflection indices `[i1, …, ik]` with `matrix = s_i1 ⋯ s_ik`.
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn identity(r: usize) -> Self {
        Self {
            matrix: DMatrix::identity(r, r),
            word: Vec::new(),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(x)).iter().cloned().collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut word = self.word.clone();
        word.extend(&other.word);
        WeylElement {
            matrix: &self.matrix * &other.matrix,
            word,
        }
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            matrix: self.matrix.transpose(),
            word: self.word.iter().rev().cloned().collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        let r = self.matrix.nrows();
        (&self.matrix - DMatrix::<f64>::identity(r, r)).norm() <= 1e-10
    }

    /// `‖MᵀM − I‖_F`.
    pub fn orthogonality_residual(&self) -> f64 {
        let r = self.matrix.nrows();
        (self.matrix.transpose() * &self.matrix - DMatrix::<f64>::identity(r, r)).norm()
    }
}

fn matrix_key(m: &DMatrix<f64>) -> Vec<i64> {
    m.iter().map(|v| (v / DEDUP_GRID).round() as i64).collect()
}

/// `Z ↦ Z − α(Z) α∨` for the root at `idx`.
///
/// The word is `[i]` when the root is the `i`-th simple root and empty
/// otherwise; look the matrix up in a generated group for a shortest word.
pub fn reflection(rs: &RootSystem, idx: usize) -> WeylElement {
    let r = rs.rank();
    let a = &rs.root(idx).coords;
    let c = coroot(rs, idx);
    let matrix = DMatrix::from_fn(r, r, |i, j| if i == j { 1.0 } else { 0.0 } - c[i] * a[j]);
    let word = rs.simple().iter().position(|&s| s == idx).into_iter().collect();
    WeylElement { matrix, word }
}

/// Finite reflection group generated by the simple reflections.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    generators: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.generators.first().map_or(0, |g| g.matrix.nrows())
    }

    /// Elements in breadth-first order; the identity comes first.
    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[WeylElement] {
        &self.generators
    }

    /// The stored element with this matrix, if any.
    pub fn find(&self, m: &DMatrix<f64>) -> Option<&WeylElement> {
        self.index.get(&matrix_key(m)).map(|&i| &self.elements[i])
    }

    pub fn to_json(&self) -> WeylJson {
        WeylJson {
            order: self.order(),
            generators: self.generators.len(),
            elements: Some(
                self.elements
                    .iter()
                    .map(|e| WeylElementJson {
                        matrix: e.matrix.row_iter().map(|row| row.iter().cloned().collect()).collect(),
                        word: e.word.clone(),
                    })
                    .collect(),
            ),
        }
    }
}

/// Serialized Weyl group; `elements` is omitted when only the order is wanted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylJson {
    pub order: usize,
    pub generators: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<WeylElementJson>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylElementJson {
    pub matrix: Vec<Vec<f64>>,
    pub word: Vec<usize>,
}

/// Breadth-first closure under left multiplication by simple reflections.
pub fn generate(rs: &RootSystem) -> Result<WeylGroup> {
    let r = rs.rank();
    if rs.simple().len() != r {
        return Err(LieError::Generation("simple roots have not been chosen".into()));
    }
    let generators: Vec<WeylElement> = rs.simple().iter().map(|&s| reflection(rs, s)).collect();
    let identity = WeylElement::identity(r);
    let mut index = HashMap::new();
    index.insert(matrix_key(&identity.matrix), 0);
    let mut elements = vec![identity];
    let mut queue = VecDeque::from([0usize]);
    while let Some(cur) = queue.pop_front() {
        for g in &generators {
            let next = g.compose(&elements[cur]);
            let key = matrix_key(&next.matrix);
            if index.contains_key(&key) {
                continue;
            }
            if elements.len() >= MAX_ORDER {
                return Err(LieError::Generation(format!("more than {MAX_ORDER} elements")));
            }
            index.insert(key, elements.len());
            queue.push_back(elements.len());
            elements.push(next);
        }
    }
    Ok(WeylGroup {
        elements,
        generators,
        index,
    })
}

/// Signs of the simple roots on a regular `x`.
pub fn chamber_of(rs: &RootSystem, x: &[f64]) -> Result<Vec<i8>> {
    let vanishing = vanishing_roots(rs, x);
    if !vanishing.is_empty() {
        return Err(LieError::Regularity { vanishing });
    }
    Ok(rs
        .simple()
        .iter()
        .map(|&i| if rs.root(i).value(x) > 0.0 { 1 } else { -1 })
        .collect())
}

/// Signs of all positive roots on a regular `x`.
///
/// Unlike the simple-root signs this separates every Weyl chamber, so it is
/// the key to use when counting chambers.
pub fn chamber_signature(rs: &RootSystem, x: &[f64]) -> Result<Vec<bool>> {
    let vanishing = vanishing_roots(rs, x);
    if !vanishing.is_empty() {
        return Err(LieError::Regularity { vanishing });
    }
    Ok(rs.positive().iter().map(|&i| rs.root(i).value(x) > 0.0).collect())
}

/// The element of `t` on which every simple root takes the value 1.
pub fn dominant_regular(rs: &RootSystem) -> Result<Vec<f64>> {
    let r = rs.rank();
    let simple = rs.simple_vectors();
    if simple.len() != r {
        return Err(LieError::SimpleRoots("no simple roots chosen".into()));
    }
    let a = DMatrix::from_fn(r, r, |i, j| simple[i][j]);
    let x = a.lu().solve(&DVector::from_element(r, 1.0)).ok_or(LieError::Singular)?;
    Ok(x.iter().cloned().collect())
}

/// Whether every simple root is `≥ −CHAMBER_TOL` on `x`.
pub fn in_closed_chamber(rs: &RootSystem, x: &[f64]) -> bool {
    rs.simple().iter().all(|&i| rs.root(i).value(x) >= -CHAMBER_TOL)
}

/// Reflects `x` across simple walls until it lies in the closed fundamental
/// chamber; returns the representative and the Weyl element used.
pub fn to_fundamental_domain(rs: &RootSystem, w: &WeylGroup, x: &[f64]) -> Result<(Vec<f64>, WeylElement)> {
    let r = rs.rank();
    if x.len() != r {
        return Err(LieError::dim(r, x.len()));
    }
    let generators = w.generators();
    let mut cur = x.to_vec();
    let mut acc = WeylElement::identity(r);
    for _ in 0..=w.order() {
        let wall = rs.simple().iter().position(|&i| rs.root(i).value(&cur) < -CHAMBER_TOL);
        match wall {
            None => {
                let element = w
                    .find(&acc.matrix)
                    .cloned()
                    .ok_or_else(|| LieError::Internal("descent left the Weyl group".into()))?;
                return Ok((cur, element));
            }
            Some(i) => {
                cur = generators[i].apply(&cur);
                acc = generators[i].compose(&acc);
            }
        }
    }
    Err(LieError::Internal("chamber descent did not terminate".into()))
}

/// Distinct points `{w·x : w ∈ W}`.
pub fn weyl_orbit(w: &WeylGroup, x: &[f64]) -> Vec<Vec<f64>> {
    let scale = 1.0 + x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let tol = 1e-8 * scale;
    let cell = 1e-6 * scale;
    let mut cells: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let mut points: Vec<Vec<f64>> = Vec::new();
    for e in w.elements() {
        let p = e.apply(x);
        if find_near(&cells, &points, &p, cell, tol).is_some() {
            continue;
        }
        let key: Vec<i64> = p.iter().map(|v| (v / cell).round() as i64).collect();
        cells.entry(key).or_default().push(points.len());
        points.push(p);
    }
    points
}

/// Looks up `p` in a hash grid, probing neighbouring cells only along
/// coordinates that sit within `tol` of a cell boundary.
fn find_near(
    cells: &HashMap<Vec<i64>, Vec<usize>>,
    points: &[Vec<f64>],
    p: &[f64],
    cell: f64,
    tol: f64,
) -> Option<usize> {
    let mut keys: Vec<Vec<i64>> = vec![Vec::with_capacity(p.len())];
    for v in p {
        let scaled = v / cell;
        let base = scaled.round();
        let mut options = vec![base as i64];
        let frac = scaled - base;
        if (frac.abs() - 0.5).abs() * cell < tol {
            options.push(base as i64 + if frac > 0.0 { 1 } else { -1 });
        }
        keys = keys
            .into_iter()
            .flat_map(|k| {
                options.iter().map(move |&o| {
                    let mut k = k.clone();
                    k.push(o);
                    k
                })
            })
            .collect();
    }
    keys.iter().filter_map(|k| cells.get(k)).flatten().copied().find(|&i| {
        points[i].iter().zip(p).all(|(a, b)| (a - b).abs() <= tol)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_classical, Family};
    use crate::cartan::{choose_positive, root_decomposition, standard_cartan, DecompositionOptions, PositiveChoice};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;
    use std::sync::Arc;

    fn system(f: Family, n: usize) -> RootSystem {
        let l = Arc::new(build_classical(f, n).unwrap());
        let t = standard_cartan(l).unwrap();
        let rs = root_decomposition(&t, DecompositionOptions::default()).unwrap();
        choose_positive(&rs, PositiveChoice::Auto { seed: 0 }).unwrap()
    }

    fn maps_roots_to_roots(rs: &RootSystem, e: &WeylElement) -> bool {
        rs.roots().iter().all(|a| {
            let image = e.apply(&a.coords);
            rs.roots()
                .iter()
                .any(|b| b.coords.iter().zip(&image).all(|(x, y)| (x - y).abs() < 1e-7))
        })
    }

    #[test]
    fn reflection_basics() {
        let rs = system(Family::Su, 3);
        for idx in 0..rs.roots().len() {
            let s = reflection(&rs, idx);
            let a = &rs.root(idx).coords;
            let image = s.apply(a);
            assert!(image.iter().zip(a).all(|(x, y)| (x + y).abs() < 1e-12));
            assert!(s.compose(&s).is_identity());
            assert!(s.orthogonality_residual() < 1e-10);
            assert!(maps_roots_to_roots(&rs, &s));
        }
    }

    #[test]
    fn orders() {
        for (f, n, order) in [
            (Family::Su, 2, 2),
            (Family::Su, 3, 6),
            (Family::Su, 4, 24),
            (Family::So, 5, 8),
            (Family::So, 7, 48),
            (Family::Sp, 3, 48),
            (Family::So, 8, 192),
        ] {
            let w = generate(&system(f, n)).unwrap();
            assert_eq!(w.order(), order, "{f:?} {n}");
        }
    }

    #[test]
    fn words_reproduce_matrices() {
        let rs = system(Family::So, 5);
        let w = generate(&rs).unwrap();
        for e in w.elements() {
            let mut m = DMatrix::<f64>::identity(2, 2);
            for &i in &e.word {
                m *= &w.generators()[i].matrix;
            }
            assert!((m - &e.matrix).norm() < 1e-10);
            assert!(maps_roots_to_roots(&rs, e));
        }
        // Longest element of B2 has length 4.
        assert_eq!(w.elements().iter().map(|e| e.word.len()).max(), Some(4));
    }

    #[test]
    fn closure_under_composition_and_inverse() {
        let w = generate(&system(Family::Su, 4)).unwrap();
        for a in w.elements().iter().step_by(5) {
            assert!(w.find(&a.inverse().matrix).is_some());
            for b in w.elements().iter().step_by(7) {
                assert!(w.find(&a.compose(b).matrix).is_some());
            }
        }
    }

    #[test]
    fn chambers() {
        let rs = system(Family::Su, 3);
        let x = dominant_regular(&rs).unwrap();
        assert_eq!(chamber_of(&rs, &x).unwrap(), vec![1, 1]);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(chamber_of(&rs, &neg).unwrap(), vec![-1, -1]);
        assert!(chamber_of(&rs, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn sampled_chambers_match_order() {
        let rs = system(Family::Su, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen = HashSet::new();
        for _ in 0..2000 {
            let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if let Ok(sig) = chamber_signature(&rs, &x) {
                seen.insert(sig);
            }
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn fundamental_domain() {
        let rs = system(Family::So, 7);
        let w = generate(&rs).unwrap();
        let y = dominant_regular(&rs).unwrap();
        let (same, e) = to_fundamental_domain(&rs, &w, &y).unwrap();
        assert!(e.is_identity() && e.word.is_empty());
        assert!(same.iter().zip(&y).all(|(a, b)| (a - b).abs() < 1e-12));

        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        let (can, e) = to_fundamental_domain(&rs, &w, &neg).unwrap();
        assert!(in_closed_chamber(&rs, &can));
        let moved = e.apply(&neg);
        assert!(moved.iter().zip(&can).all(|(a, b)| (a - b).abs() < 1e-10));
        let oracle: Vec<Vec<f64>> = weyl_orbit(&w, &neg).into_iter().filter(|p| in_closed_chamber(&rs, p)).collect();
        assert_eq!(oracle.len(), 1);
        assert!(oracle[0].iter().zip(&can).all(|(a, b)| (a - b).abs() < 1e-8));
        // Idempotent.
        let (again, e2) = to_fundamental_domain(&rs, &w, &can).unwrap();
        assert!(e2.is_identity());
        assert!(again.iter().zip(&can).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn orbits() {
        let rs = system(Family::Su, 3);
        let w = generate(&rs).unwrap();
        assert_eq!(weyl_orbit(&w, &[0.0, 0.0]).len(), 1);
        assert_eq!(weyl_orbit(&w, &dominant_regular(&rs).unwrap()).len(), 6);

        let b2 = system(Family::So, 5);
        let wb = generate(&b2).unwrap();
        // (1, 0) lies on the wall of θ2 only.
        let orbit = weyl_orbit(&wb, &[1.0, 0.0]);
        assert_eq!(orbit.len(), 4);
        assert_eq!(wb.order() % orbit.len(), 0);
    }

    #[test]
    fn singular_canonical_form_keeps_wall() {
        let rs = system(Family::So, 5);
        let w = generate(&rs).unwrap();
        let (can, _) = to_fundamental_domain(&rs, &w, &[0.0, -1.0]).unwrap();
        let zeros = rs.simple().iter().filter(|&&i| rs.root(i).value(&can).abs() < 1e-10).count();
        assert_eq!(zeros, 1);
    }

    #[test]
    fn json_can_omit_elements() {
        let w = generate(&system(Family::Su, 2)).unwrap();
        let mut j = w.to_json();
        assert_eq!(j.elements.as_ref().unwrap().len(), 2);
        j.elements = None;
        let v = serde_json::to_value(&j).unwrap();
        assert!(v.get("elements").is_none());
        assert_eq!(v["order"], 2);
    }
}
