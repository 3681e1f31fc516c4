//! Kontsevich oriented graphs on ordered sinks, optionally carrying one
//! tri-vector (Jacobiator) vertex, and their skew-symmetry normal forms.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::canon::{leaf_orderings, sort_parity, ColoredAdjacency};
use crate::error::{parse_err, Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// An internal vertex: two ordered outgoing edges (Left, Right), or three
/// for the Jacobiator vertex of a Leibniz graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    arity: u8,
    targets: [u8; 3],
}

impl Node {
    pub fn wedge(left: usize, right: usize) -> Node {
        Node { arity: 2, targets: [left as u8, right as u8, 0] }
    }

    pub fn jacobiator(a: usize, b: usize, c: usize) -> Node {
        Node { arity: 3, targets: [a as u8, b as u8, c as u8] }
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn targets(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets[..self.arity as usize].iter().map(|&t| t as usize)
    }

    pub fn target(&self, slot: usize) -> usize {
        self.targets[slot] as usize
    }

    pub(crate) fn set_target(&mut self, slot: usize, t: usize) {
        self.targets[slot] = t as u8;
    }

    pub fn is_jacobiator(&self) -> bool {
        self.arity == 3
    }
}

/// A graph on `sinks` ordered sinks (vertices `0..k`) and internal vertices
/// `k..k+n`, each internal vertex carrying its ordered outgoing edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KontsevichGraph {
    sinks: usize,
    nodes: Vec<Node>,
}

/// Kontsevich graphs proper have only wedge vertices.
pub type OrientedKGraph = KontsevichGraph;
/// Leibniz graphs have exactly one Jacobiator vertex.
pub type LeibnizGraph = KontsevichGraph;

impl KontsevichGraph {
    /// Validated constructor: no self-loops, no repeated target at one
    /// vertex, every target in range.
    pub fn new(sinks: usize, nodes: Vec<Node>) -> Result<Self> {
        let total = sinks + nodes.len();
        if total > u8::MAX as usize {
            return Err(Error::InvalidGraph("too many vertices".into()));
        }
        for (i, node) in nodes.iter().enumerate() {
            let v = sinks + i;
            let t: Vec<usize> = node.targets().collect();
            for &x in &t {
                if x >= total {
                    return Err(Error::IndexOutOfRange { index: x, count: total });
                }
                if x == v {
                    return Err(Error::InvalidGraph(format!("self-loop at vertex {v}")));
                }
            }
            for a in 0..t.len() {
                for b in a + 1..t.len() {
                    if t[a] == t[b] {
                        return Err(Error::InvalidGraph(format!("double edge from vertex {v} to {}", t[a])));
                    }
                }
            }
        }
        Ok(KontsevichGraph { sinks, nodes })
    }

    pub(crate) fn from_parts(sinks: usize, nodes: Vec<Node>) -> Self {
        KontsevichGraph { sinks, nodes }
    }

    /// The single wedge `P` on two sinks.
    pub fn wedge() -> Self {
        KontsevichGraph { sinks: 2, nodes: vec![Node::wedge(0, 1)] }
    }

    pub fn sink_count(&self) -> usize {
        self.sinks
    }

    pub fn internal_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// The node of absolute vertex index `v` (which must be internal).
    pub fn node(&self, v: usize) -> &Node {
        &self.nodes[v - self.sinks]
    }

    pub fn jacobiator_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_jacobiator()).count()
    }

    pub fn is_leibniz(&self) -> bool {
        self.jacobiator_count() == 1
    }

    /// Absolute index of the first Jacobiator vertex.
    pub fn jacobiator(&self) -> Option<usize> {
        self.nodes.iter().position(|n| n.is_jacobiator()).map(|i| i + self.sinks)
    }

    /// Edges into each vertex, as `(source vertex, slot)`.
    pub fn in_edges(&self, v: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            for (s, t) in n.targets().enumerate() {
                if t == v {
                    out.push((i + self.sinks, s));
                }
            }
        }
        out
    }

    /// Swaps sinks according to `perm[old_sink] = new_sink`.
    pub fn permute_sinks(&self, perm: &[usize]) -> Self {
        let k = self.sinks;
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let mut m = *n;
                for s in 0..n.arity() {
                    let t = n.target(s);
                    if t < k {
                        m.set_target(s, perm[t]);
                    }
                }
                m
            })
            .collect();
        KontsevichGraph { sinks: k, nodes }
    }

    fn has_repeated_target(&self) -> bool {
        self.nodes.iter().any(|n| {
            let t = &n.targets[..n.arity()];
            (0..t.len()).any(|a| (a + 1..t.len()).any(|b| t[a] == t[b]))
        })
    }
}

impl fmt::Display for KontsevichGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.nodes.len(), self.sinks)?;
        for n in &self.nodes {
            if n.is_jacobiator() {
                write!(f, " J")?;
            }
            for t in n.targets() {
                write!(f, " {t}")?;
            }
        }
        Ok(())
    }
}

/// Normal form under relabeling of internal vertices (sinks fixed) and
/// reordering of outgoing edges: each Left/Right swap contributes −1, a
/// permutation of the Jacobiator's edges contributes its parity. Returns
/// sign 0 for graphs equal to minus themselves.
pub fn canonicalize_oriented(g: &KontsevichGraph) -> (KontsevichGraph, i32) {
    let k = g.sinks;
    let total = k + g.nodes.len();
    let mut out = vec![Vec::new(); total];
    let mut inn = vec![Vec::new(); total];
    for (i, n) in g.nodes.iter().enumerate() {
        for t in n.targets() {
            out[k + i].push(t);
            inn[t].push(k + i);
        }
    }
    let colors: Vec<u64> = (0..total)
        .map(|v| if v < k { v as u64 } else { k as u64 + g.nodes[v - k].arity as u64 })
        .collect();
    let adj = ColoredAdjacency { colors, out: &out, inn: &inn };
    let zero_by_edges = g.has_repeated_target();
    let mut best: Option<(Vec<Node>, i32)> = None;
    let mut zero = zero_by_edges;
    let mut map = vec![0usize; total];
    for order in leaf_orderings(&adj) {
        for (new, &old) in order.iter().enumerate() {
            map[old] = new;
        }
        let mut sign = 1;
        let mut nodes = vec![Node::wedge(0, 0); g.nodes.len()];
        for (i, n) in g.nodes.iter().enumerate() {
            let mut t: Vec<u8> = n.targets[..n.arity()].iter().map(|&x| map[x as usize] as u8).collect();
            if !zero_by_edges {
                sign *= sort_parity(&t);
            }
            t.sort_unstable();
            let mut m = *n;
            for (s, x) in t.into_iter().enumerate() {
                m.targets[s] = x;
            }
            nodes[map[k + i] - k] = m;
        }
        match &best {
            Some((b, s)) if *b == nodes => {
                if *s != sign {
                    zero = true;
                }
            }
            Some((b, _)) if *b < nodes => {}
            _ => best = Some((nodes, sign)),
        }
    }
    let (nodes, sign) = best.unwrap_or((Vec::new(), 1));
    (KontsevichGraph { sinks: k, nodes }, if zero { 0 } else { sign })
}

/// A rational linear combination of normalized oriented (or Leibniz) graphs
/// on a common number of sinks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedSum {
    sinks: usize,
    terms: BTreeMap<KontsevichGraph, Rational>,
}

pub type LeibnizSum = OrientedSum;

impl OrientedSum {
    pub fn new(sinks: usize) -> Self {
        OrientedSum { sinks, terms: BTreeMap::new() }
    }

    pub fn from_graph(g: &KontsevichGraph) -> Self {
        let mut s = OrientedSum::new(g.sinks);
        s.add_term(g, Rational::one());
        s
    }

    pub fn sink_count(&self) -> usize {
        self.sinks
    }

    /// Adds `coef · g` after normalizing `g`.
    pub fn add_term(&mut self, g: &KontsevichGraph, coef: Rational) {
        assert_eq!(g.sinks, self.sinks, "sink count mismatch");
        if coef.is_zero() {
            return;
        }
        let (c, sign) = canonicalize_oriented(g);
        match sign {
            0 => {}
            1 => self.add_normalized(c, coef),
            _ => self.add_normalized(c, -coef),
        }
    }

    pub(crate) fn add_normalized(&mut self, g: KontsevichGraph, coef: Rational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(g) {
            Entry::Vacant(e) => {
                if !coef.is_zero() {
                    e.insert(coef);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Normalizes a batch of raw terms in parallel and merges them.
    pub fn from_raw_terms(sinks: usize, raw: Vec<(KontsevichGraph, Rational)>) -> Self {
        let normalized: Vec<(KontsevichGraph, Rational)> = raw
            .into_par_iter()
            .filter_map(|(g, c)| {
                let (n, s) = canonicalize_oriented(&g);
                match s {
                    0 => None,
                    1 => Some((n, c)),
                    _ => Some((n, -c)),
                }
            })
            .collect();
        let mut out = OrientedSum::new(sinks);
        for (g, c) in normalized {
            out.add_normalized(g, c);
        }
        out
    }

    pub fn add(&self, other: &OrientedSum) -> OrientedSum {
        assert_eq!(self.sinks, other.sinks, "sink count mismatch");
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_normalized(g.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &OrientedSum) -> OrientedSum {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> OrientedSum {
        if c.is_zero() {
            return OrientedSum::new(self.sinks);
        }
        OrientedSum {
            sinks: self.sinks,
            terms: self.terms.iter().map(|(g, x)| (g.clone(), x * c)).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&KontsevichGraph, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &KontsevichGraph) -> Rational {
        let (c, s) = canonicalize_oriented(g);
        match (s, self.terms.get(&c)) {
            (1, Some(x)) => x.clone(),
            (-1, Some(x)) => -x.clone(),
            _ => Rational::zero(),
        }
    }

    /// The constant `c` with `self = c·other`, if there is one; `None` for two empty sums.
    pub fn ratio_to(&self, other: &OrientedSum) -> Option<Rational> {
        if self.sinks != other.sinks || self.terms.len() != other.terms.len() {
            return None;
        }
        let mut ratio: Option<Rational> = None;
        for (g, c) in &self.terms {
            let r = c / other.terms.get(g)?;
            match &ratio {
                Some(x) if *x != r => return None,
                _ => ratio = Some(r),
            }
        }
        ratio
    }

    /// Number of orbits of the terms under permutations of the sinks.
    pub fn sink_orbit_count(&self) -> usize {
        let perms = crate::canon::signed_permutations(self.sinks);
        let mut seen = std::collections::BTreeSet::new();
        let mut orbits = 0;
        for g in self.terms.keys() {
            if seen.contains(g) {
                continue;
            }
            orbits += 1;
            for (p, _) in &perms {
                seen.insert(canonicalize_oriented(&g.permute_sinks(p)).0);
            }
        }
        orbits
    }
}

/// Merges every term into its normal form; the result is a fixpoint.
pub fn reduce_mod_skew(s: &OrientedSum) -> OrientedSum {
    OrientedSum::from_raw_terms(s.sinks, s.terms.iter().map(|(g, c)| (g.clone(), c.clone())).collect())
}

/// Parses one term line body (after the coefficient) into a graph.
fn graph_from_tokens(tokens: &[&str], line: usize) -> Result<KontsevichGraph> {
    let n: usize = tokens
        .first()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(line, "expected internal vertex count"))?;
    let k: usize = tokens
        .get(1)
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(line, "expected sink count"))?;
    let mut nodes = Vec::with_capacity(n);
    let mut rest = tokens[2..].iter();
    let index = |t: Option<&&str>| -> Result<usize> {
        t.and_then(|x| x.parse().ok()).ok_or_else(|| parse_err(line, "expected target index"))
    };
    let mut pending: Vec<&str> = Vec::new();
    while let Some(tok) = rest.next() {
        if *tok == "J" {
            let a = index(rest.next())?;
            let b = index(rest.next())?;
            let c = index(rest.next())?;
            nodes.push(Node::jacobiator(a, b, c));
        } else {
            pending.push(tok);
            let b = index(rest.next())?;
            let a = index(Some(&pending[0]))?;
            pending.clear();
            nodes.push(Node::wedge(a, b));
        }
    }
    if nodes.len() != n {
        return Err(parse_err(line, format!("expected {n} internal vertices, found {}", nodes.len())));
    }
    KontsevichGraph::new(k, nodes).map_err(|e| parse_err(line, e.to_string()))
}

/// Parses an oriented (or Leibniz) series file. Terms are normalized.
pub fn parse_oriented_sum(text: &str) -> Result<OrientedSum> {
    let mut sinks: Option<usize> = None;
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("sinks=") {
                sinks = Some(v.trim().parse().map_err(|_| parse_err(n, "bad sinks header"))?);
            }
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 3 {
            return Err(parse_err(n, "expected `<n> <k> <coefficient> <targets...>`"));
        }
        let coef = parse_rational(tokens[2]).ok_or_else(|| parse_err(n, "bad coefficient"))?;
        let mut body = vec![tokens[0], tokens[1]];
        body.extend_from_slice(&tokens[3..]);
        let g = graph_from_tokens(&body, n)?;
        match sinks {
            Some(k) if k != g.sinks => return Err(parse_err(n, format!("expected {k} sinks"))),
            _ => sinks = Some(g.sinks),
        }
        raw.push((g, coef));
    }
    let sinks = sinks.ok_or_else(|| parse_err(1, "missing `# sinks=<k>` header in empty series"))?;
    Ok(OrientedSum::from_raw_terms(sinks, raw))
}

pub fn format_oriented_sum(s: &OrientedSum) -> String {
    let mut out = format!("# graphflow v1\n# sinks={}\n", s.sinks);
    for (g, c) in s.iter() {
        out.push_str(&format!("{} {} {} ", g.nodes.len(), g.sinks, format_rational(c)));
        for n in &g.nodes {
            if n.is_jacobiator() {
                out.push_str(" J");
            }
            for t in n.targets() {
                out.push_str(&format!(" {t}"));
            }
        }
        out.push('\n');
    }
    out
}
