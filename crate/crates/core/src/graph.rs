//! Unoriented graphs with a wedge ordering of their edges, their canonical
//! forms and rational linear combinations of them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::canon::{leaf_orderings, sort_parity, ColoredAdjacency};
use crate::error::{parse_err, Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// A graph on `vertex_count` vertices whose edge sequence order is
/// significant: swapping two edges negates the graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnorientedGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl UnorientedGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(Error::IndexOutOfRange { index: v, count: vertex_count });
                }
            }
            if a == b {
                return Err(Error::LoopEdge(a));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        Ok(UnorientedGraph { vertex_count, edges: normalized })
    }

    /// The single edge on two vertices.
    pub fn stick() -> Self {
        UnorientedGraph { vertex_count: 2, edges: vec![(0, 1)] }
    }

    pub fn vertex(count: usize) -> Self {
        UnorientedGraph { vertex_count: count, edges: Vec::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn has_multiple_edges(&self) -> bool {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e.windows(2).any(|w| w[0] == w[1])
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count <= 1 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Relabels vertices by `map[old] = new`, keeping the edge order.
    pub fn relabel(&self, map: &[usize]) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (map[a], map[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        UnorientedGraph { vertex_count: self.vertex_count, edges }
    }

    /// Reorders edges: the new edge sequence is `edges[perm[0]], edges[perm[1]], ...`.
    pub fn permute_edges(&self, perm: &[usize]) -> Self {
        let edges = perm.iter().map(|&i| self.edges[i]).collect();
        UnorientedGraph { vertex_count: self.vertex_count, edges }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

impl fmt::Display for UnorientedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ", self.vertex_count, self.edges.len())?;
        for (a, b) in &self.edges {
            write!(f, " {} {}", a, b)?;
        }
        Ok(())
    }
}

/// Canonical representative of an isomorphism class together with the sign
/// relating the input to it. A sign of 0 marks a zero graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub graph: UnorientedGraph,
    pub sign: i32,
}

/// Canonical form: the lexicographically least sorted edge list over all
/// labelings reachable by color refinement, and the parity of the edge
/// permutation carrying the input order onto it.
pub fn canonicalize(g: &UnorientedGraph) -> CanonicalForm {
    let adj = g.adjacency();
    let empty = vec![Vec::new(); g.vertex_count];
    let colored = ColoredAdjacency {
        colors: vec![0; g.vertex_count],
        out: &adj,
        inn: &empty,
    };
    let multiple = g.has_multiple_edges();
    let mut best: Option<(Vec<(usize, usize)>, i32)> = None;
    let mut zero = multiple;
    for order in leaf_orderings(&colored) {
        let mut map = vec![0; g.vertex_count];
        for (new, &old) in order.iter().enumerate() {
            map[old] = new;
        }
        let relabeled = g.relabel(&map).edges;
        let sign = if multiple { 0 } else { sort_parity(&relabeled) };
        let mut sorted = relabeled;
        sorted.sort_unstable();
        match &best {
            Some((b, s)) if *b == sorted => {
                if *s != sign {
                    zero = true;
                }
            }
            Some((b, _)) if *b < sorted => {}
            _ => best = Some((sorted, sign)),
        }
    }
    let (edges, sign) = best.unwrap_or((Vec::new(), 1));
    CanonicalForm {
        graph: UnorientedGraph { vertex_count: g.vertex_count, edges },
        sign: if zero { 0 } else { sign },
    }
}

/// A finite rational linear combination of canonical unoriented graphs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphSum {
    terms: BTreeMap<UnorientedGraph, Rational>,
}

impl GraphSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_graph(g: &UnorientedGraph) -> Self {
        let mut s = Self::new();
        s.add_term(g, Rational::one());
        s
    }

    /// Adds `coef · g`, canonicalizing `g` first.
    pub fn add_term(&mut self, g: &UnorientedGraph, coef: Rational) {
        let c = canonicalize(g);
        if c.sign == 0 || coef.is_zero() {
            return;
        }
        let coef = if c.sign < 0 { -coef } else { coef };
        self.add_canonical(c.graph, coef);
    }

    pub(crate) fn add_canonical(&mut self, g: UnorientedGraph, coef: Rational) {
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

    pub fn add(&self, other: &GraphSum) -> GraphSum {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_canonical(g.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GraphSum) -> GraphSum {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> GraphSum {
        if c.is_zero() {
            return GraphSum::new();
        }
        GraphSum {
            terms: self.terms.iter().map(|(g, x)| (g.clone(), x * c)).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&UnorientedGraph, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &UnorientedGraph) -> Rational {
        let c = canonicalize(g);
        if c.sign == 0 {
            return Rational::zero();
        }
        match self.terms.get(&c.graph) {
            Some(x) if c.sign > 0 => x.clone(),
            Some(x) => -x.clone(),
            None => Rational::zero(),
        }
    }

    /// `(vertex_count, edge_count)` when all terms share it.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(|g| (g.vertex_count(), g.edge_count()));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Splits the sum by edge count.
    pub fn homogeneous_parts(&self) -> BTreeMap<usize, GraphSum> {
        let mut parts: BTreeMap<usize, GraphSum> = BTreeMap::new();
        for (g, c) in &self.terms {
            parts.entry(g.edge_count()).or_default().add_canonical(g.clone(), c.clone());
        }
        parts
    }
}

impl FromIterator<(UnorientedGraph, Rational)> for GraphSum {
    fn from_iter<I: IntoIterator<Item = (UnorientedGraph, Rational)>>(iter: I) -> Self {
        let mut s = GraphSum::new();
        for (g, c) in iter {
            s.add_term(&g, c);
        }
        s
    }
}

fn parse_usizes(tokens: &[&str], line: usize) -> Result<Vec<usize>> {
    tokens
        .iter()
        .map(|t| t.parse::<usize>().map_err(|_| parse_err(line, format!("not an index: {t:?}"))))
        .collect()
}

fn graph_from_tokens(tokens: &[&str], line: usize) -> Result<UnorientedGraph> {
    let nums = parse_usizes(tokens, line)?;
    if nums.len() < 2 {
        return Err(parse_err(line, "expected `<vertices> <edges> ...`"));
    }
    let (n, e) = (nums[0], nums[1]);
    if nums.len() != 2 + 2 * e {
        return Err(parse_err(
            line,
            format!("expected {} endpoint indices, found {}", 2 * e, nums.len() - 2),
        ));
    }
    let edges = nums[2..].chunks(2).map(|c| (c[0], c[1])).collect();
    UnorientedGraph::new(n, edges).map_err(|err| parse_err(line, err.to_string()))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses a single graph: `<vertex_count> <edge_count>  <i1> <j1> ...`.
pub fn parse_graph(text: &str) -> Result<UnorientedGraph> {
    let mut lines = content_lines(text);
    let (n, line) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    if let Some((extra, _)) = lines.next() {
        return Err(parse_err(extra, "more than one graph"));
    }
    let tokens: Vec<&str> = line.split_whitespace().collect();
    graph_from_tokens(&tokens, n)
}

pub fn format_graph(g: &UnorientedGraph) -> String {
    g.to_string()
}

/// Parses a graph sum: one `<coefficient> <graph>` term per line.
pub fn parse_graph_sum(text: &str) -> Result<GraphSum> {
    let mut sum = GraphSum::new();
    for (n, line) in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let coef = tokens
            .first()
            .and_then(|t| parse_rational(t))
            .ok_or_else(|| parse_err(n, "expected a rational coefficient"))?;
        let g = graph_from_tokens(&tokens[1..], n)?;
        sum.add_term(&g, coef);
    }
    Ok(sum)
}

pub fn format_graph_sum(s: &GraphSum) -> String {
    let mut out = String::from("# graphflow v1\n");
    for (g, c) in s.iter() {
        out.push_str(&format_rational(c));
        out.push(' ');
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn g(n: usize, e: &[(usize, usize)]) -> UnorientedGraph {
        UnorientedGraph::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn triangle_is_a_zero_graph() {
        // a reflection fixes one edge and swaps the other two
        let t = canonicalize(&g(3, &[(1, 2), (0, 1), (0, 2)]));
        assert_eq!(t.graph.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(t.sign, 0);
    }

    #[test]
    fn edge_transposition_flips_sign() {
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let a = canonicalize(&k4);
        assert_eq!(a.graph, k4);
        assert_eq!(a.sign, 1);
        let b = canonicalize(&k4.permute_edges(&[1, 0, 2, 3, 4, 5]));
        assert_eq!(b.graph, a.graph);
        assert_eq!(b.sign, -1);
    }

    #[test]
    fn double_edge_is_zero() {
        assert_eq!(canonicalize(&g(2, &[(0, 1), (0, 1)])).sign, 0);
    }

    #[test]
    fn loops_are_rejected() {
        assert_eq!(UnorientedGraph::new(2, vec![(1, 1)]), Err(Error::LoopEdge(1)));
        assert!(matches!(
            UnorientedGraph::new(2, vec![(0, 2)]),
            Err(Error::IndexOutOfRange { index: 2, count: 2 })
        ));
    }

    #[test]
    fn path_on_three_vertices_is_zero() {
        // swapping the two leaves swaps the two edges
        assert_eq!(canonicalize(&g(3, &[(0, 1), (1, 2)])).sign, 0);
    }

    #[test]
    fn sum_arithmetic() {
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let tet = GraphSum::from_graph(&k4);
        assert_eq!(tet.len(), 1);
        assert!(tet.add(&tet.scale(&int(-1))).is_empty());
        assert!(tet.scale(&int(0)).is_empty());
        let swapped = GraphSum::from_graph(&k4.permute_edges(&[0, 1, 2, 3, 5, 4]));
        assert!(tet.add(&swapped).is_empty());
        let wheel = g(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 0), (5, 1), (5, 2), (5, 3), (5, 4)]);
        let mix = tet.add(&GraphSum::from_graph(&wheel).scale(&frac(5, 2)));
        assert_eq!(mix.len(), 2);
    }

    #[test]
    fn parse_tetrahedron() {
        let t = parse_graph("4 6  0 1 0 2 0 3 1 2 1 3 2 3").unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (4, 6));
        assert_eq!(format_graph(&t), "4 6  0 1 0 2 0 3 1 2 1 3 2 3");
        let s = parse_graph("2 1  0 1").unwrap();
        assert_eq!(s, UnorientedGraph::stick());
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(parse_graph("# c\n3 1 0 3"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3 2 0 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("2 1 1 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph_sum("x 2 1 0 1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn graph_sum_text_round_trip() {
        let text = "1 6 10  0 1 0 2\n";
        assert!(parse_graph_sum(text).is_err());
        let s = parse_graph_sum("# graphflow v1\n1 4 6  0 1 0 2 0 3 1 2 1 3 2 3\n-5/2 3 3  0 1 1 2 0 2\n").unwrap();
        assert_eq!(parse_graph_sum(&format_graph_sum(&s)).unwrap(), s);
    }
}
