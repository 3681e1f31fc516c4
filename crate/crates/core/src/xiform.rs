//! Graph terms in odd-variable form.
//!
//! A multivector encoded by graphs is written with its undifferentiated odd
//! variables ξ kept in an explicit order. Every sign in the graph-level
//! Schouten bracket and in the orientation morphism comes from removing a ξ
//! from that ordered product (a left derivative), exactly as in the
//! coordinate formulas; no combinatorial sign rule is used anywhere else.
//!
//! Conversion to and from the value form (graphs on ordered sinks) uses the
//! convention that a k-vector `A = Σ_{a₁<…<a_k} A^{a₁…a_k} ξ_{a₁}⋯ξ_{a_k}` has
//! value `A(f₁,…,f_k) = Σ A^{a₁…a_k} ∂_{a₁}f₁⋯∂_{a_k}f_k` over all indices.

use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::canon::signed_permutations;
use crate::graph::UnorientedGraph;
use crate::oriented::{canonicalize_oriented, KontsevichGraph, Node, OrientedSum};
use crate::rational::{factorial, Rational};

pub(crate) const FREE: u8 = u8::MAX;

/// Internal vertices of a term; targets index other internal vertices or are `FREE`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct XiTerm {
    pub coef: Rational,
    pub nodes: Vec<Node>,
    /// Ordered product of the remaining odd variables, as `(vertex, slot)`.
    pub free: Vec<(u8, u8)>,
}

impl XiTerm {
    /// Odd-variable form of `coef · g` (the `1/k!` undoes the skew-symmetrization).
    pub fn from_values(g: &KontsevichGraph, coef: &Rational) -> XiTerm {
        let k = g.sink_count();
        let mut free = vec![(0u8, 0u8); k];
        let nodes = g
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let mut m = *n;
                for s in 0..n.arity() {
                    let t = n.target(s);
                    if t < k {
                        free[t] = (i as u8, s as u8);
                        m.set_target(s, FREE as usize);
                    } else {
                        m.set_target(s, t - k);
                    }
                }
                m
            })
            .collect();
        XiTerm { coef: coef / factorial(k), nodes, free }
    }

    /// The value-form graph with the i-th free slot sent to sink `perm[i]`.
    pub fn to_graph(&self, perm: &[usize]) -> KontsevichGraph {
        let k = self.free.len();
        let mut nodes: Vec<Node> = self
            .nodes
            .iter()
            .map(|n| {
                let mut m = *n;
                for s in 0..n.arity() {
                    let t = n.target(s);
                    if t != FREE as usize {
                        m.set_target(s, t + k);
                    }
                }
                m
            })
            .collect();
        for (i, &(v, s)) in self.free.iter().enumerate() {
            nodes[v as usize].set_target(s as usize, perm[i]);
        }
        KontsevichGraph::from_parts(k, nodes)
    }
}

fn merge(mut a: HashMap<KontsevichGraph, Rational>, b: HashMap<KontsevichGraph, Rational>) -> HashMap<KontsevichGraph, Rational> {
    if a.len() < b.len() {
        return merge(b, a);
    }
    for (g, c) in b {
        *a.entry(g).or_insert_with(Rational::zero) += c;
    }
    a
}

/// Value form of a sum of odd-variable terms with `sinks` free variables:
/// the signed sum over all placements of the free slots on the sinks.
pub(crate) fn to_values(terms: &[XiTerm], sinks: usize) -> OrientedSum {
    let perms = signed_permutations(sinks);
    let map = terms
        .par_iter()
        .fold(HashMap::new, |mut acc: HashMap<KontsevichGraph, Rational>, t| {
            debug_assert_eq!(t.free.len(), sinks);
            for (p, s) in &perms {
                let (g, sign) = canonicalize_oriented(&t.to_graph(p));
                if sign == 0 {
                    continue;
                }
                let c = if sign * s > 0 { t.coef.clone() } else { -t.coef.clone() };
                *acc.entry(g).or_insert_with(Rational::zero) += c;
            }
            acc
        })
        .reduce(HashMap::new, merge);
    let mut out = OrientedSum::new(sinks);
    let mut entries: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    for (g, c) in entries {
        out.add_normalized(g, c);
    }
    out
}

/// Odd-variable form of a value-form sum.
pub(crate) fn from_values(s: &OrientedSum) -> Vec<XiTerm> {
    s.iter().map(|(g, c)| XiTerm::from_values(g, c)).collect()
}

fn product(a: &XiTerm, b: &XiTerm, coef: Rational) -> XiTerm {
    let shift = a.nodes.len();
    let mut nodes = a.nodes.clone();
    nodes.extend(b.nodes.iter().map(|n| {
        let mut m = *n;
        for s in 0..n.arity() {
            let t = n.target(s);
            if t != FREE as usize {
                m.set_target(s, t + shift);
            }
        }
        m
    }));
    let mut free = a.free.clone();
    free.extend(b.free.iter().map(|&(v, s)| (v + shift as u8, s)));
    XiTerm { coef, nodes, free }
}

/// Coordinate Schouten bracket of two single terms:
/// `[[A,B]] = (−1)^{|A|−1} Σ_ℓ ∂_{ξ_ℓ}A · ∂_{x^ℓ}B − Σ_ℓ ∂_{x^ℓ}A · ∂_{ξ_ℓ}B`.
pub(crate) fn schouten_terms(a: &XiTerm, b: &XiTerm) -> Vec<XiTerm> {
    let mut out = Vec::new();
    let base = &a.coef * &b.coef;
    let na = a.nodes.len();
    let odd_a = a.free.len() % 2 == 0; // (−1)^{|A|−1} = −1 when |A| even
    for t in 0..a.free.len() {
        let mut sign_neg = odd_a;
        if t % 2 == 1 {
            sign_neg = !sign_neg;
        }
        let (v, s) = a.free[t];
        let mut a2 = a.clone();
        a2.free.remove(t);
        for w in 0..b.nodes.len() {
            let mut p = product(&a2, b, if sign_neg { -base.clone() } else { base.clone() });
            p.nodes[v as usize].set_target(s as usize, na + w);
            out.push(p);
        }
    }
    for t in 0..b.free.len() {
        let sign_neg = t % 2 == 0;
        let (v, s) = b.free[t];
        let mut b2 = b.clone();
        b2.free.remove(t);
        for w in 0..na {
            let mut p = product(a, &b2, if sign_neg { -base.clone() } else { base.clone() });
            p.nodes[na + v as usize].set_target(s as usize, w);
            out.push(p);
        }
    }
    out
}

/// Expands `∏ Δ_ij` over the edges of `g` (first edge acting first) on the
/// product of formal multivectors of the given arities, one per vertex in
/// vertex order. Each vertex content is `A^{a₁…a_r} ξ_{a₁}⋯ξ_{a_r}` with
/// a fixed slot assignment: an outgoing edge takes the lowest free slot of its
/// tail, which accounts for the `1/r!` normalization of the content; slots
/// never taken by an edge carry the remaining factorial.
pub(crate) fn orient_terms(g: &UnorientedGraph, arities: &[u8], coef: &Rational) -> Vec<XiTerm> {
    assert_eq!(arities.len(), g.vertex_count());
    let nodes: Vec<Node> = arities
        .iter()
        .map(|&r| {
            let mut n = if r == 3 { Node::jacobiator(0, 0, 0) } else { Node::wedge(0, 0) };
            for s in 0..r as usize {
                n.set_target(s, FREE as usize);
            }
            n
        })
        .collect();
    let free: Vec<(u8, u8)> = arities
        .iter()
        .enumerate()
        .flat_map(|(v, &r)| (0..r).map(move |s| (v as u8, s)))
        .collect();
    let mut used = vec![0u8; arities.len()];
    let mut out = Vec::new();
    let mut state = XiTerm { coef: coef.clone(), nodes, free };
    expand_edges(g.edges(), 0, arities, &mut used, &mut state, false, &mut out);
    out
}

fn expand_edges(
    edges: &[(usize, usize)],
    e: usize,
    arities: &[u8],
    used: &mut [u8],
    state: &mut XiTerm,
    negated: bool,
    out: &mut Vec<XiTerm>,
) {
    if e == edges.len() {
        let mut t = state.clone();
        // a content with `m` of its `r` slots left is `1/m!` of the
        // fixed-slot product
        let weight: Rational = arities.iter().zip(used.iter()).map(|(&r, &u)| factorial((r - u) as usize)).product();
        t.coef = &t.coef / weight;
        if negated {
            t.coef = -t.coef;
        }
        out.push(t);
        return;
    }
    let (i, j) = edges[e];
    for (tail, head) in [(i, j), (j, i)] {
        if used[tail] == arities[tail] {
            continue;
        }
        let slot = used[tail];
        let pos = state
            .free
            .iter()
            .position(|&(v, s)| v as usize == tail && s == slot)
            .expect("lowest free slot is present");
        state.free.remove(pos);
        state.nodes[tail].set_target(slot as usize, head);
        used[tail] += 1;
        expand_edges(edges, e + 1, arities, used, state, negated ^ (pos % 2 == 1), out);
        used[tail] -= 1;
        state.nodes[tail].set_target(slot as usize, FREE as usize);
        state.free.insert(pos, (tail as u8, slot));
    }
}
