//! Cartan matrices, Dynkin diagrams, their classification against the
//! A–G catalog, and a plain-text rendering.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::RootSystem;
use crate::error::{LieError, Result};

/// Allowed distance between a computed Cartan entry and its integer.
pub const ROUNDING_TOL: f64 = 1e-6;

/// Relative tolerance under which two squared root lengths are equal.
pub const LENGTH_TOL: f64 = 1e-8;

/// `n_ij = 2⟨α_i, α_j⟩ / ⟨α_j, α_j⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanMatrix {
    pub entries: Vec<Vec<i32>>,
}

impl CartanMatrix {
    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    /// Builds and validates the matrix from simple root vectors.
    pub fn from_simple_roots(simple: &[Vec<f64>]) -> Result<Self> {
        let r = simple.len();
        let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
        let mut entries = vec![vec![0; r]; r];
        for i in 0..r {
            for j in 0..r {
                let value = 2.0 * dot(&simple[i], &simple[j]) / dot(&simple[j], &simple[j]);
                let rounded = value.round();
                let allowed = if i == j { rounded == 2.0 } else { (-3.0..=0.0).contains(&rounded) };
                if (value - rounded).abs() > ROUNDING_TOL || !allowed {
                    return Err(LieError::NonCrystallographic { i, j, value });
                }
                entries[i][j] = rounded as i32;
            }
        }
        let cm = Self { entries };
        cm.validate()?;
        Ok(cm)
    }

    fn validate(&self) -> Result<()> {
        let r = self.rank();
        for i in 0..r {
            if self.entries[i].len() != r {
                return Err(LieError::dim(r, self.entries[i].len()));
            }
            for j in 0..r {
                let v = self.entries[i][j];
                let ok = if i == j { v == 2 } else { (-3..=0).contains(&v) && (v == 0) == (self.entries[j][i] == 0) };
                if !ok {
                    return Err(LieError::NonCrystallographic { i, j, value: v as f64 });
                }
            }
        }
        Ok(())
    }
}

/// Cartan matrix of the chosen simple roots.
pub fn cartan_matrix(rs: &RootSystem) -> Result<CartanMatrix> {
    if rs.simple().len() != rs.rank() {
        return Err(LieError::SimpleRoots("no simple roots chosen".into()));
    }
    CartanMatrix::from_simple_roots(&rs.simple_vectors())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynkinNode {
    pub label: String,
    pub length_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynkinEdge {
    pub i: usize,
    pub j: usize,
    pub multiplicity: u8,
    /// The endpoint carrying the shorter root, for multiple edges.
    pub arrow_to: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynkinComponent {
    pub nodes: Vec<usize>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynkinDiagram {
    pub nodes: Vec<DynkinNode>,
    pub edges: Vec<DynkinEdge>,
    pub components: Vec<DynkinComponent>,
}

impl DynkinDiagram {
    /// Component labels joined with `+`, e.g. `A1+A1`.
    pub fn label(&self) -> String {
        self.components.iter().map(|c| c.label.as_str()).collect::<Vec<_>>().join("+")
    }

    fn neighbours(&self, v: usize) -> Vec<(usize, &DynkinEdge)> {
        let mut out: Vec<(usize, &DynkinEdge)> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.i == v {
                    Some((e.j, e))
                } else if e.j == v {
                    Some((e.i, e))
                } else {
                    None
                }
            })
            .collect();
        out.sort_by_key(|(n, _)| *n);
        out
    }

    fn degree(&self, v: usize) -> usize {
        self.neighbours(v).len()
    }

    fn edge(&self, a: usize, b: usize) -> Option<&DynkinEdge> {
        self.edges.iter().find(|e| (e.i == a && e.j == b) || (e.i == b && e.j == a))
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_ascii(self))
    }
}

/// Diagram with edges `n_ij · n_ji` and arrows toward the shorter root.
pub fn build_diagram(cm: &CartanMatrix, lengths: &[f64]) -> Result<DynkinDiagram> {
    cm.validate()?;
    let r = cm.rank();
    if lengths.len() != r {
        return Err(LieError::dim(r, lengths.len()));
    }
    let nodes = lengths
        .iter()
        .enumerate()
        .map(|(k, &length_sq)| DynkinNode {
            label: format!("a{}", k + 1),
            length_sq,
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let m = cm.entries[i][j] * cm.entries[j][i];
            if m == 0 {
                continue;
            }
            if !(1..=3).contains(&m) {
                return Err(LieError::NonCrystallographic { i, j, value: m as f64 });
            }
            let (li, lj) = (lengths[i], lengths[j]);
            let equal = (li - lj).abs() <= LENGTH_TOL * li.max(lj);
            let arrow_to = match (m, equal) {
                (1, true) => None,
                (1, false) | (_, true) => {
                    return Err(LieError::Consistency(format!(
                        "edge ({i}, {j}) of multiplicity {m} joins roots of squared lengths {li} and {lj}"
                    )))
                }
                _ => Some(if li < lj { i } else { j }),
            };
            edges.push(DynkinEdge {
                i,
                j,
                multiplicity: m as u8,
                arrow_to,
            });
        }
    }
    let mut dg = DynkinDiagram {
        nodes,
        edges,
        components: Vec::new(),
    };
    dg.components = connected_components(&dg)
        .into_iter()
        .map(|nodes| DynkinComponent { nodes, label: String::new() })
        .collect();
    let labels = classify(&dg);
    for (c, label) in dg.components.iter_mut().zip(labels) {
        c.label = label;
    }
    Ok(dg)
}

/// Diagram of a root system with chosen simple roots.
pub fn diagram_of(rs: &RootSystem) -> Result<DynkinDiagram> {
    let cm = cartan_matrix(rs)?;
    let lengths: Vec<f64> = rs
        .simple_vectors()
        .iter()
        .map(|v| v.iter().map(|x| x * x).sum())
        .collect();
    build_diagram(&cm, &lengths)
}

fn connected_components(dg: &DynkinDiagram) -> Vec<Vec<usize>> {
    let n = dg.nodes.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            for (nb, _) in dg.neighbours(comp[k]) {
                if !seen[nb] {
                    seen[nb] = true;
                    comp.push(nb);
                }
            }
            k += 1;
        }
        comp.sort();
        out.push(comp);
    }
    out
}

fn component_edges<'a>(dg: &'a DynkinDiagram, nodes: &[usize]) -> Vec<&'a DynkinEdge> {
    dg.edges.iter().filter(|e| nodes.contains(&e.i)).collect()
}

/// Label of each connected component, in the order of `dg.components`.
pub fn classify(dg: &DynkinDiagram) -> Vec<String> {
    let comps = if dg.components.is_empty() {
        connected_components(dg)
    } else {
        dg.components.iter().map(|c| c.nodes.clone()).collect()
    };
    comps.iter().map(|c| classify_component(dg, c)).collect()
}

fn classify_component(dg: &DynkinDiagram, nodes: &[usize]) -> String {
    let k = nodes.len();
    let edges = component_edges(dg, nodes);
    if edges.len() + 1 != k {
        return "unknown".into();
    }
    let max_degree = nodes.iter().map(|&v| dg.degree(v)).max().unwrap_or(0);
    let multiple: Vec<&&DynkinEdge> = edges.iter().filter(|e| e.multiplicity > 1).collect();
    match multiple.as_slice() {
        [] => classify_simply_laced(dg, nodes, max_degree),
        [e] if e.multiplicity == 3 => if k == 2 { "G2".into() } else { "unknown".into() },
        [e] => {
            if k == 2 {
                return "B2".into();
            }
            if max_degree > 2 {
                return "unknown".into();
            }
            let (di, dj) = (dg.degree(e.i), dg.degree(e.j));
            if k == 4 && di == 2 && dj == 2 {
                return "F4".into();
            }
            let end = if di == 1 {
                e.i
            } else if dj == 1 {
                e.j
            } else {
                return "unknown".into();
            };
            if e.arrow_to == Some(end) {
                format!("B{k}")
            } else {
                format!("C{k}")
            }
        }
        _ => "unknown".into(),
    }
}

fn classify_simply_laced(dg: &DynkinDiagram, nodes: &[usize], max_degree: usize) -> String {
    let k = nodes.len();
    if max_degree <= 2 {
        return format!("A{k}");
    }
    let branches: Vec<usize> = nodes.iter().copied().filter(|&v| dg.degree(v) >= 3).collect();
    if branches.len() != 1 || dg.degree(branches[0]) != 3 {
        return "unknown".into();
    }
    let centre = branches[0];
    let mut arms: Vec<usize> = dg
        .neighbours(centre)
        .into_iter()
        .map(|(start, _)| {
            let (mut prev, mut cur, mut len) = (centre, start, 1);
            loop {
                let next: Vec<usize> = dg.neighbours(cur).into_iter().map(|(n, _)| n).filter(|&n| n != prev).collect();
                match next.as_slice() {
                    [n] => {
                        prev = cur;
                        cur = *n;
                        len += 1;
                    }
                    _ => break len,
                }
            }
        })
        .collect();
    arms.sort();
    match arms.as_slice() {
        [1, 1, m] => format!("D{}", m + 3),
        [1, 2, 2] => "E6".into(),
        [1, 2, 3] => "E7".into(),
        [1, 2, 4] => "E8".into(),
        _ => "unknown".into(),
    }
}

/// Path through the component between its two farthest ends, starting from
/// the lower-indexed end.
fn main_chain(dg: &DynkinDiagram, nodes: &[usize]) -> Vec<usize> {
    let path_from = |start: usize| -> Vec<Vec<usize>> {
        // All simple paths from `start` in a tree, by DFS.
        let mut out = Vec::new();
        let mut stack = vec![vec![start]];
        while let Some(path) = stack.pop() {
            let last = *path.last().unwrap();
            let next: Vec<usize> = dg
                .neighbours(last)
                .into_iter()
                .map(|(n, _)| n)
                .filter(|n| !path.contains(n))
                .collect();
            if next.is_empty() {
                out.push(path);
            } else {
                for n in next.into_iter().rev() {
                    let mut p = path.clone();
                    p.push(n);
                    stack.push(p);
                }
            }
        }
        out
    };
    let mut best: Vec<usize> = vec![nodes[0]];
    for &v in nodes.iter().filter(|&&v| dg.degree(v) <= 1) {
        for p in path_from(v) {
            let better = p.len() > best.len() || (p.len() == best.len() && p < best);
            if better && p[0] < *p.last().unwrap() || (better && p.len() == 1) {
                best = p;
            }
        }
    }
    best
}

fn bond(dg: &DynkinDiagram, from: usize, to: usize) -> &'static str {
    match dg.edge(from, to) {
        Some(e) => match (e.multiplicity, e.arrow_to) {
            (2, Some(t)) if t == to => " => ",
            (2, _) => " <= ",
            (3, Some(t)) if t == to => " ≡> ",
            (3, _) => " <≡ ",
            _ => " - ",
        },
        None => "   ",
    }
}

fn vertical(dg: &DynkinDiagram, from: usize, to: usize) -> &'static str {
    match dg.edge(from, to).map(|e| (e.multiplicity, e.arrow_to)) {
        Some((2, Some(t))) if t == to => "v",
        Some((2, _)) => "^",
        Some((3, _)) => "#",
        _ => "|",
    }
}

/// One block of lines per connected component: the longest chain on the first
/// line, remaining arms hanging below their attachment node.
pub fn render_ascii(dg: &DynkinDiagram) -> String {
    let comps = if dg.components.is_empty() {
        connected_components(dg)
    } else {
        dg.components.iter().map(|c| c.nodes.clone()).collect()
    };
    comps
        .iter()
        .map(|c| render_component(dg, c))
        .collect::<Vec<_>>()
        .join("\n")
}

fn render_component(dg: &DynkinDiagram, nodes: &[usize]) -> String {
    let chain = main_chain(dg, nodes);
    let mut line = String::new();
    let mut column = vec![0usize; dg.nodes.len()];
    for (pos, &v) in chain.iter().enumerate() {
        if pos > 0 {
            line.push_str(bond(dg, chain[pos - 1], v));
        }
        column[v] = line.chars().count();
        line.push('o');
    }
    let mut rows: Vec<Vec<char>> = vec![line.chars().collect()];
    let mut placed: Vec<usize> = chain.clone();
    // Hang every remaining node below the node it attaches to.
    let mut frontier: Vec<(usize, usize)> = chain.iter().map(|&v| (v, 0)).collect();
    while let Some((v, depth)) = frontier.pop() {
        for (n, _) in dg.neighbours(v) {
            if placed.contains(&n) {
                continue;
            }
            placed.push(n);
            column[n] = column[v];
            let bar_row = depth * 2 + 1;
            let node_row = bar_row + 1;
            while rows.len() <= node_row {
                rows.push(Vec::new());
            }
            put(&mut rows[bar_row], column[v], vertical(dg, v, n).chars().next().unwrap());
            put(&mut rows[node_row], column[v], 'o');
            frontier.push((n, node_row / 2));
        }
    }
    rows.into_iter()
        .map(|r| r.into_iter().collect::<String>().trim_end().to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

fn put(row: &mut Vec<char>, col: usize, c: char) {
    while row.len() <= col {
        row.push(' ');
    }
    row[col] = c;
}
