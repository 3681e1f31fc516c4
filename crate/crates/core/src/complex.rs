//! The graded Lie algebra of unoriented graphs: insertions, the bracket,
//! the vertex-expanding differential and cocycle search.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{canonicalize, GraphSum, UnorientedGraph};
use crate::linalg::{nullspace, SparseRow};
use crate::rational::Rational;

/// Insertion of `a` into vertex `i` of `b`, before canonicalization.
///
/// Vertices of `b` below `i` keep their labels, `a` occupies
/// `i..i + |V(a)|`, the remaining vertices of `b` shift up. The edge order is
/// `E(a)` followed by `E(b)`; every edge of `b` at `i` is reattached to each
/// vertex of `a` in turn.
pub fn insert_at_labeled(a: &UnorientedGraph, b: &UnorientedGraph, i: usize) -> Result<Vec<UnorientedGraph>> {
    if i >= b.vertex_count() {
        return Err(Error::IndexOutOfRange { index: i, count: b.vertex_count() });
    }
    let na = a.vertex_count();
    let n = na + b.vertex_count() - 1;
    let shift = |v: usize| if v < i { v } else { v + na - 1 };
    let base: Vec<(usize, usize)> = a.edges().iter().map(|&(x, y)| (x + i, y + i)).collect();
    let incident: Vec<usize> = b
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, &(x, y))| x == i || y == i)
        .map(|(k, _)| k)
        .collect();
    let combos = na.pow(incident.len() as u32);
    let mut out = Vec::with_capacity(combos);
    for mut code in 0..combos {
        let mut choice = vec![0; b.edge_count()];
        for &k in &incident {
            choice[k] = code % na;
            code /= na;
        }
        let mut edges = base.clone();
        for (k, &(x, y)) in b.edges().iter().enumerate() {
            let (x, y) = if x == i {
                (i + choice[k], shift(y))
            } else if y == i {
                (shift(x), i + choice[k])
            } else {
                (shift(x), shift(y))
            };
            edges.push((x, y));
        }
        out.push(UnorientedGraph::new(n, edges)?);
    }
    Ok(out)
}

pub fn insert_at(a: &UnorientedGraph, b: &UnorientedGraph, i: usize) -> Result<GraphSum> {
    Ok(insert_at_labeled(a, b, i)?.into_iter().map(|g| (g, Rational::one())).collect())
}

/// `a ∘ b`: the sum of insertions of `a` into every vertex of `b`, extended bilinearly.
pub fn insertion(a: &GraphSum, b: &GraphSum) -> GraphSum {
    let pairs: Vec<(&UnorientedGraph, &Rational, &UnorientedGraph, &Rational)> = a
        .iter()
        .flat_map(|(ga, ca)| b.iter().map(move |(gb, cb)| (ga, ca, gb, cb)))
        .collect();
    let parts: Vec<GraphSum> = pairs
        .par_iter()
        .map(|&(ga, ca, gb, cb)| {
            let coef = ca * cb;
            let mut s = GraphSum::new();
            for i in 0..gb.vertex_count() {
                for g in insert_at_labeled(ga, gb, i).expect("index in range") {
                    s.add_term(&g, coef.clone());
                }
            }
            s
        })
        .collect();
    parts.iter().fold(GraphSum::new(), |acc, p| acc.add(p))
}

/// `[a, b] = a ∘ b − (−1)^{|E(a)|·|E(b)|} b ∘ a`, per homogeneous component.
pub fn bracket(a: &GraphSum, b: &GraphSum) -> GraphSum {
    let mut out = GraphSum::new();
    for (ea, pa) in a.homogeneous_parts() {
        for (eb, pb) in b.homogeneous_parts() {
            let ab = insertion(&pa, &pb);
            let ba = insertion(&pb, &pa);
            out = if (ea * eb) % 2 == 0 { out.add(&ab).sub(&ba) } else { out.add(&ab).add(&ba) };
        }
    }
    out
}

/// `d(a) = [stick, a]`.
pub fn differential(a: &GraphSum) -> GraphSum {
    bracket(&GraphSum::from_graph(&UnorientedGraph::stick()), a)
}

/// Resource guard for enumeration and kernel computations.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_graphs: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_graphs: 200_000 }
    }
}

/// All canonical simple graphs with `n` vertices and `e` edges, zero graphs included.
fn all_classes(n: usize, e: usize, limits: Limits) -> Result<BTreeSet<UnorientedGraph>> {
    if e > n * n.saturating_sub(1) / 2 {
        return Ok(BTreeSet::new());
    }
    let mut layer: BTreeSet<UnorientedGraph> = BTreeSet::new();
    layer.insert(UnorientedGraph::vertex(n));
    for _ in 0..e {
        let current: Vec<UnorientedGraph> = layer.into_iter().collect();
        let next: Vec<Vec<UnorientedGraph>> = current
            .par_iter()
            .map(|g| {
                let mut out = Vec::new();
                for a in 0..n {
                    for b in a + 1..n {
                        if g.edges().contains(&(a, b)) {
                            continue;
                        }
                        let mut edges = g.edges().to_vec();
                        edges.push((a, b));
                        let h = UnorientedGraph::new(n, edges).expect("valid edge");
                        out.push(canonicalize(&h).graph);
                    }
                }
                out
            })
            .collect();
        layer = next.into_iter().flatten().collect();
        if layer.len() > limits.max_graphs {
            return Err(Error::ResourceBound(format!(
                "more than {} graph classes on {n} vertices",
                limits.max_graphs
            )));
        }
    }
    Ok(layer)
}

/// All nonzero canonical graphs with `n` vertices and `e` edges, sorted
/// lexicographically by canonical edge sequence.
pub fn enumerate_graphs(n: usize, e: usize, connected_only: bool, limits: Limits) -> Result<Vec<UnorientedGraph>> {
    Ok(all_classes(n, e, limits)?
        .into_iter()
        .filter(|g| !connected_only || g.is_connected())
        .filter(|g| canonicalize(g).sign != 0)
        .collect())
}

/// Matrix of `d` from the given basis, as sparse integer rows indexed by
/// the (lexicographically sorted) target graphs.
pub fn differential_matrix(basis: &[UnorientedGraph]) -> (Vec<UnorientedGraph>, Vec<SparseRow>) {
    let images: Vec<GraphSum> = basis.par_iter().map(|g| differential(&GraphSum::from_graph(g))).collect();
    let mut targets: BTreeMap<UnorientedGraph, Vec<(usize, BigInt)>> = BTreeMap::new();
    for (col, img) in images.iter().enumerate() {
        for (g, c) in img.iter() {
            debug_assert!(c.is_integer());
            targets.entry(g.clone()).or_default().push((col, c.to_integer()));
        }
    }
    let (names, rows) = targets.into_iter().unzip();
    (names, rows)
}

/// Basis of the cocycles of `d` among sums of nonzero graphs with `n`
/// vertices and `e` edges (connected graphs only unless requested).
pub fn kernel_basis(n: usize, e: usize, connected_only: bool, limits: Limits) -> Result<Vec<GraphSum>> {
    let basis = enumerate_graphs(n, e, connected_only, limits)?;
    let (_, rows) = differential_matrix(&basis);
    let vectors = nullspace(rows, basis.len());
    Ok(vectors
        .into_iter()
        .map(|v| {
            let mut s = GraphSum::new();
            for (g, c) in basis.iter().zip(v) {
                if !c.is_zero() {
                    s.add_canonical(g.clone(), c);
                }
            }
            s
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn g(n: usize, e: &[(usize, usize)]) -> UnorientedGraph {
        UnorientedGraph::new(n, e.to_vec()).unwrap()
    }

    fn tetrahedron() -> UnorientedGraph {
        g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn stick_bracket_vanishes() {
        let s = GraphSum::from_graph(&UnorientedGraph::stick());
        assert!(bracket(&s, &s).is_empty());
        assert!(differential(&s).is_empty());
    }

    #[test]
    fn insertion_into_isolated_vertex_is_disjoint_union() {
        let b = UnorientedGraph::vertex(1);
        let terms = insert_at_labeled(&tetrahedron(), &b, 0).unwrap();
        assert_eq!(terms, vec![tetrahedron()]);
        let s = GraphSum::from_graph(&tetrahedron());
        assert_eq!(insertion(&s, &GraphSum::from_graph(&b)), s);
    }

    #[test]
    fn insert_stick_into_triangle_vertex() {
        let tri = g(3, &[(0, 1), (1, 2), (0, 2)]);
        let raw = insert_at_labeled(&UnorientedGraph::stick(), &tri, 0).unwrap();
        assert_eq!(raw.len(), 4);
        // independent count: the two triangle edges at vertex 0 each pick
        // one of the two stick endpoints
        let mut brute = GraphSum::new();
        for x in 0..2 {
            for y in 0..2 {
                // stick = (0,1); triangle vertices 1,2 become 2,3
                brute.add_term(&g(4, &[(0, 1), (x, 2), (2, 3), (y, 3)]), int(1));
            }
        }
        assert_eq!(insert_at(&UnorientedGraph::stick(), &tri, 0).unwrap(), brute);
        assert!(insert_at(&UnorientedGraph::stick(), &tri, 3).is_err());
    }

    #[test]
    fn tetrahedron_is_a_cocycle() {
        assert!(differential(&GraphSum::from_graph(&tetrahedron())).is_empty());
    }

    #[test]
    fn d_squared_vanishes_on_small_graphs() {
        for e in 3..=6 {
            for h in enumerate_graphs(5, e, false, Limits::default()).unwrap() {
                let d1 = differential(&GraphSum::from_graph(&h));
                assert!(differential(&d1).is_empty(), "d² ≠ 0 on {h}");
            }
        }
    }

    #[test]
    fn enumeration_small_cases() {
        let lim = Limits::default();
        assert_eq!(enumerate_graphs(4, 6, true, lim).unwrap(), vec![canonicalize(&tetrahedron()).graph]);
        assert!(enumerate_graphs(2, 2, true, lim).unwrap().is_empty());
        assert_eq!(enumerate_graphs(2, 1, true, lim).unwrap().len(), 1);
    }

    #[test]
    fn resource_guard() {
        let lim = Limits { max_graphs: 3 };
        assert!(matches!(enumerate_graphs(7, 10, true, lim), Err(Error::ResourceBound(_))));
    }

    #[test]
    fn small_kernels() {
        let lim = Limits::default();
        let k = kernel_basis(4, 6, true, lim).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].len(), 1);
        let stick = kernel_basis(2, 1, true, lim).unwrap();
        assert_eq!(stick, vec![GraphSum::from_graph(&UnorientedGraph::stick())]);
    }
}
