//! Orientation of unoriented graphs into Kontsevich graphs, and the
//! graph-level Schouten bracket.

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{GraphSum, UnorientedGraph};
use crate::oriented::{KontsevichGraph, OrientedSum};
use crate::rational::Rational;
use crate::xiform::{from_values, orient_terms, schouten_terms, to_values, XiTerm};

/// Number of sinks of `or(γ)(P,…,P)` for a graph with `n` vertices and `e` edges.
pub fn orientation_arity(n: usize, e: usize) -> Result<usize> {
    match (2 * n).checked_sub(e) {
        Some(k @ 1..=3) => Ok(k),
        _ => Err(Error::DegreeMismatch(format!(
            "{n} vertices and {e} edges do not give a 1-, 2- or 3-vector"
        ))),
    }
}

fn common_arity(gamma: &GraphSum, extra: usize) -> Result<Option<usize>> {
    let mut arity = None;
    for (g, _) in gamma.iter() {
        let k = orientation_arity(g.vertex_count(), g.edge_count())? + extra;
        match arity {
            None => arity = Some(k),
            Some(a) if a != k => {
                return Err(Error::DegreeMismatch(format!("terms of arity {a} and {k} mixed")));
            }
            _ => {}
        }
    }
    Ok(arity)
}

/// `or(γ)(P,…,P)` as a sum of Kontsevich graphs.
///
/// Every vertex carries a copy of `P`; each edge `(i,j)` acts as
/// `Δ_ij = ∂_{ξ}(i)·∂_x(j) + ∂_x(i)·∂_{ξ}(j)`, the first edge of `E(γ)`
/// acting first. The result is skew-symmetric over its sinks. Graphs with
/// `2n−2`, `2n−1`, `2n−3` edges give bi-, 1- and tri-vectors.
pub fn orient(gamma: &GraphSum) -> Result<OrientedSum> {
    let Some(k) = common_arity(gamma, 0)? else {
        return Ok(OrientedSum::new(2));
    };
    let terms: Vec<(&UnorientedGraph, &Rational)> = gamma.iter().collect();
    let xi: Vec<XiTerm> = terms
        .par_iter()
        .flat_map_iter(|(g, c)| orient_terms(g, &vec![2; g.vertex_count()], c))
        .collect();
    Ok(to_values(&xi, k))
}

/// `or(γ)(P,…,P)` for one graph exactly as labelled, edge order included.
pub fn orient_labeled(g: &UnorientedGraph) -> Result<OrientedSum> {
    let k = orientation_arity(g.vertex_count(), g.edge_count())?;
    let xi = orient_terms(g, &vec![2; g.vertex_count()], &Rational::from_integer(1.into()));
    Ok(to_values(&xi, k))
}

/// The coefficient that `or(γ)(P,…,P)` gives the oriented graph `term`
/// (up to the normalization of `term`'s own representative).
pub fn sign_oracle(term: &KontsevichGraph, gamma: &UnorientedGraph) -> Result<Rational> {
    let s = orient_labeled(gamma)?;
    if term.sink_count() != s.sink_count() || term.internal_count() != gamma.vertex_count() {
        return Err(Error::InvalidGraph("the term cannot arise from this graph".into()));
    }
    let c = s.coefficient(term);
    if c.is_zero() {
        return Err(Error::InvalidGraph("the term does not occur in the orientation".into()));
    }
    Ok(c)
}

/// `Σ_m or(γ)(P,…,T,…,P)` with a formal tri-vector `T` in the m-th
/// argument, as a sum of Leibniz graphs (the `T` vertex has three targets).
pub(crate) fn orient_with_trivector(gamma: &GraphSum) -> Result<OrientedSum> {
    let Some(k) = common_arity(gamma, 1)? else {
        return Ok(OrientedSum::new(3));
    };
    let terms: Vec<(&UnorientedGraph, &Rational, usize)> = gamma
        .iter()
        .flat_map(|(g, c)| (0..g.vertex_count()).map(move |m| (g, c, m)))
        .collect();
    let xi: Vec<XiTerm> = terms
        .par_iter()
        .flat_map_iter(|&(g, c, m)| {
            let mut arities = vec![2u8; g.vertex_count()];
            arities[m] = 3;
            orient_terms(g, &arities, c)
        })
        .collect();
    Ok(to_values(&xi, k))
}

/// The graph sum encoding `[[A,B]]` for the multivectors encoded by `a` and `b`.
///
/// The bracket is taken in coordinates on the odd-variable form,
/// `[[A,B]] = (−1)^{|A|−1} ∂_ξA·∂_xB − ∂_xA·∂_ξB`, where `∂_x` acts on a
/// graph by the Leibniz rule over its internal vertices.
pub fn schouten_bracket_graphs(a: &OrientedSum, b: &OrientedSum) -> Result<OrientedSum> {
    let (k, m) = (a.sink_count(), b.sink_count());
    if k == 0 && m == 0 {
        return Err(Error::BracketOfFunctions);
    }
    let sinks = k + m - 1;
    let xa = from_values(a);
    let xb = from_values(b);
    let pairs: Vec<(&XiTerm, &XiTerm)> = xa.iter().flat_map(|x| xb.iter().map(move |y| (x, y))).collect();
    let xi: Vec<XiTerm> = pairs
        .par_iter()
        .flat_map_iter(|&(x, y)| schouten_terms(x, y))
        .filter(|t| !t.coef.is_zero())
        .collect();
    Ok(to_values(&xi, sinks))
}

/// `π_S(a,b) = (−1)^{|a|−1}[[a,b]]` at graph level.
pub fn pi_s_graphs(a: &OrientedSum, b: &OrientedSum) -> Result<OrientedSum> {
    let s = schouten_bracket_graphs(a, b)?;
    Ok(if a.sink_count() % 2 == 1 { s } else { s.scale(&-Rational::from_integer(1.into())) })
}

/// The Jacobiator `[[P,P]]` as a sum of graphs on three sinks.
pub fn jacobiator_graphs() -> OrientedSum {
    let p = OrientedSum::from_graph(&crate::oriented::KontsevichGraph::wedge());
    schouten_bracket_graphs(&p, &p).expect("bivectors")
}

