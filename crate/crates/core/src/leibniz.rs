//! Leibniz graphs: the factorization of `[[P, Or(γ)(P)]]` through the
//! Jacobiator, its expansion into Kontsevich graphs, and the trivialization
//! of coboundary flows.

use num_traits::One;
use rayon::prelude::*;

use crate::complex::differential;
use crate::error::{Error, Result};
use crate::graph::GraphSum;
use crate::orient::{jacobiator_graphs, orient, orient_with_trivector, orientation_arity, schouten_bracket_graphs};
use crate::oriented::{KontsevichGraph, LeibnizSum, Node, OrientedSum};
use crate::rational::{int, Rational};

fn wedge_sum() -> OrientedSum {
    OrientedSum::from_graph(&KontsevichGraph::wedge())
}

fn check_bivector_cocycle(gamma: &GraphSum) -> Result<()> {
    for (g, _) in gamma.iter() {
        if orientation_arity(g.vertex_count(), g.edge_count())? != 2 {
            return Err(Error::DegreeMismatch(format!(
                "expected 2n−2 edges, got {} vertices and {} edges",
                g.vertex_count(),
                g.edge_count()
            )));
        }
    }
    Ok(())
}

/// `♢(P, [[P,P]])`: the sum over vertices of `γ` of `or(γ)` with the
/// Jacobiator in that vertex and `P` elsewhere, as Leibniz graphs.
pub fn diamond_from_cocycle(gamma: &GraphSum) -> Result<LeibnizSum> {
    check_bivector_cocycle(gamma)?;
    orient_with_trivector(gamma)
}

/// Replaces every Jacobiator vertex by the graphs of `[[P,P]]`, routing each
/// edge that came into it to either of the two new vertices.
pub fn leibniz_expand(s: &LeibnizSum) -> OrientedSum {
    let jac: Vec<(KontsevichGraph, Rational)> =
        jacobiator_graphs().iter().map(|(g, c)| (g.clone(), c.clone())).collect();
    let terms: Vec<(&KontsevichGraph, &Rational)> = s.iter().collect();
    let raw: Vec<(KontsevichGraph, Rational)> = terms
        .par_iter()
        .flat_map_iter(|&(g, c)| expand_one(g, c, &jac))
        .collect();
    let mut out = OrientedSum::from_raw_terms(s.sink_count(), raw);
    // graphs with several Jacobiators are expanded one vertex per pass
    if out.iter().any(|(g, _)| g.jacobiator_count() > 0) {
        out = leibniz_expand(&out);
    }
    out
}

fn expand_one(g: &KontsevichGraph, c: &Rational, jac: &[(KontsevichGraph, Rational)]) -> Vec<(KontsevichGraph, Rational)> {
    let Some(jv) = g.jacobiator() else {
        return vec![(g.clone(), c.clone())];
    };
    let k = g.sink_count();
    let fresh = k + g.internal_count();
    let targets: Vec<usize> = g.node(jv).targets().collect();
    let incoming = g.in_edges(jv);
    let mut out = Vec::new();
    for (jg, jc) in jac {
        // the Jacobiator graph has sinks 0,1,2 and internal vertices 3,4;
        // 3 takes the place of `jv`, 4 becomes a new vertex
        let place = |t: usize| match t {
            0..=2 => targets[t],
            3 => jv,
            _ => fresh,
        };
        let coef = c * jc;
        for mask in 0..1usize << incoming.len() {
            let mut nodes: Vec<Node> = g.nodes().to_vec();
            let n3 = jg.node(3);
            nodes[jv - k] = Node::wedge(place(n3.target(0)), place(n3.target(1)));
            let n4 = jg.node(4);
            nodes.push(Node::wedge(place(n4.target(0)), place(n4.target(1))));
            for (bit, &(src, slot)) in incoming.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    nodes[src - k].set_target(slot, fresh);
                }
            }
            out.push((KontsevichGraph::from_parts(k, nodes), coef.clone()));
        }
    }
    out
}

/// Counts and verdict of the factorization check for one cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub is_cocycle: bool,
    /// Graphs in `Or(γ)(P)`.
    pub orient_terms: usize,
    /// Graphs in `[[P, Or(γ)(P)]]`.
    pub lhs_terms: usize,
    /// Leibniz graphs in `♢(P, [[P,P]])`.
    pub rhs_leibniz_terms: usize,
    /// The same Leibniz graphs counted up to permutation of sinks.
    pub rhs_leibniz_orbits: usize,
    /// Graphs in the expansion of the Leibniz graphs.
    pub rhs_expanded_terms: usize,
    pub residual_terms: usize,
}

impl FactorizationReport {
    pub fn equal(&self) -> bool {
        self.residual_terms == 0
    }
}

/// The left- and right-hand sides of `2·[[P, Or(γ)(P)]] = ♢(P, [[P,P]])`
/// as expanded sums of Kontsevich graphs on three sinks, together with the
/// intermediate sums.
pub struct Factorization {
    pub orientation: OrientedSum,
    pub lhs: OrientedSum,
    pub diamond: LeibnizSum,
    pub rhs: OrientedSum,
}

pub fn factorization(gamma: &GraphSum) -> Result<Factorization> {
    check_bivector_cocycle(gamma)?;
    let orientation = orient(gamma)?;
    let bracket = schouten_bracket_graphs(&wedge_sum(), &orientation)?;
    let lhs = bracket.scale(&int(2));
    let diamond = diamond_from_cocycle(gamma)?;
    let rhs = leibniz_expand(&diamond);
    Ok(Factorization { orientation, lhs, diamond, rhs })
}

pub fn verify_factorization(gamma: &GraphSum) -> Result<FactorizationReport> {
    let f = factorization(gamma)?;
    let residual = f.lhs.sub(&f.rhs);
    Ok(FactorizationReport {
        is_cocycle: differential(gamma).is_empty(),
        orient_terms: f.orientation.len(),
        lhs_terms: f.lhs.len(),
        rhs_leibniz_terms: f.diamond.len(),
        rhs_leibniz_orbits: f.diamond.sink_orbit_count(),
        rhs_expanded_terms: f.rhs.len(),
        residual_terms: residual.len(),
    })
}

/// The pieces of `Or(dβ)(P) = (improper terms) − [[P, X]]`.
///
/// The sign in front of `[[P, X]]` is opposite to the bi-vector cocycle case
/// because `Or(β)` has odd degree.
pub struct CoboundarySplit {
    /// `X = 2·Or(β)(P)`, a 1-vector.
    pub x: OrientedSum,
    /// `Or(dβ)(P)`.
    pub flow: OrientedSum,
    /// `[[P, X]]`.
    pub bracket: OrientedSum,
    /// `Or(β)(π_S(P,P), P, …) + …`, in Leibniz graphs.
    pub improper: LeibnizSum,
    /// Kontsevich-graph expansion of `improper`.
    pub improper_expanded: OrientedSum,
    /// `Or(dβ)(P) + [[P,X]] − improper_expanded`.
    pub residual: OrientedSum,
}

pub fn coboundary_split(beta: &GraphSum) -> Result<CoboundarySplit> {
    for (g, _) in beta.iter() {
        if orientation_arity(g.vertex_count(), g.edge_count())? != 1 {
            return Err(Error::DegreeMismatch(format!(
                "expected 2n−1 edges, got {} vertices and {} edges",
                g.vertex_count(),
                g.edge_count()
            )));
        }
    }
    let x = orient(beta)?.scale(&int(2));
    let flow = orient(&differential(beta))?;
    let bracket = schouten_bracket_graphs(&wedge_sum(), &x)?;
    // π_S(P,P) = −[[P,P]]
    let improper = orient_with_trivector(beta)?.scale(&-Rational::one());
    let improper_expanded = leibniz_expand(&improper);
    let residual = flow.add(&bracket).sub(&improper_expanded);
    Ok(CoboundarySplit { x, flow, bracket, improper, improper_expanded, residual })
}
