//! Graph sums written out as differential polynomials in the components of
//! `P`, e.g. `+10 d_t d_m d_k P^{ij} d_p P^{kl} … d_i f d_j g`.
//!
//! Internal vertex `v` names its outgoing edges by consecutive letters of
//! [`INDEX_LETTERS`]; `d_x` before a factor is the edge `x` arriving there.
//! Derivatives are listed in decreasing letter order. Sinks are `f, g, h`.

use std::collections::HashMap;

use num_traits::Signed;

use crate::error::{parse_err, Result};
use crate::oriented::{KontsevichGraph, Node, OrientedSum};
use crate::rational::{format_rational, parse_rational, Rational};

/// Bound index names, in order of use.
pub const INDEX_LETTERS: &[char] = &[
    'i', 'j', 'k', 'l', 'm', 'n', 'p', 'q', 'r', 's', 't', 'v', 'w', 'x', 'y', 'z', 'a', 'b', 'c', 'e', 'o', 'u',
];

pub const SINK_NAMES: &[char] = &['f', 'g', 'h'];

fn letter_rank(c: char) -> usize {
    INDEX_LETTERS.iter().position(|&x| x == c).unwrap_or(usize::MAX)
}

/// One term per line; the Jacobiator vertex is printed as `J^{abc}`.
///
/// Panics if a graph needs more index letters than [`INDEX_LETTERS`] has
/// or more sinks than [`SINK_NAMES`].
pub fn print_diff_poly(s: &OrientedSum) -> String {
    let mut out = String::new();
    for (g, c) in s.iter() {
        out.push_str(&print_term(g, c));
        out.push('\n');
    }
    out
}

fn print_term(g: &KontsevichGraph, c: &Rational) -> String {
    let k = g.sink_count();
    assert!(k <= SINK_NAMES.len(), "at most {} sinks can be printed", SINK_NAMES.len());
    let mut next = 0;
    let mut upper: Vec<Vec<char>> = Vec::new();
    let mut lower: Vec<Vec<char>> = vec![Vec::new(); k + g.internal_count()];
    for node in g.nodes() {
        let mut names = Vec::new();
        for t in node.targets() {
            let x = *INDEX_LETTERS.get(next).expect("graph too large for the index alphabet");
            next += 1;
            names.push(x);
            lower[t].push(x);
        }
        upper.push(names);
    }
    for l in &mut lower {
        l.sort_by_key(|&x| std::cmp::Reverse(letter_rank(x)));
    }
    let mut parts = vec![if c.is_negative() { format_rational(c) } else { format!("+{}", format_rational(c)) }];
    let mut factor = |derivs: &[char], head: String| {
        for d in derivs {
            parts.push(format!("d_{d}"));
        }
        parts.push(head);
    };
    for (v, names) in upper.iter().enumerate() {
        let base = if names.len() == 3 { 'J' } else { 'P' };
        factor(&lower[k + v], format!("{base}^{{{}}}", names.iter().collect::<String>()));
    }
    for sink in 0..k {
        factor(&lower[sink], SINK_NAMES[sink].to_string());
    }
    parts.join(" ")
}

/// Reads the format written by [`print_diff_poly`], with any consistent
/// choice of single-character bound indices. Terms are normalized, so equal
/// graphs written with different index names merge.
pub fn parse_diff_poly(text: &str) -> Result<OrientedSum> {
    let mut raw: Vec<(usize, KontsevichGraph, Rational)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (g, c) = parse_term(line, n)?;
        raw.push((n, g, c));
    }
    let sinks = raw.iter().map(|(_, g, _)| g.sink_count()).max().unwrap_or(2);
    let mut out = OrientedSum::new(sinks);
    for (n, g, c) in raw {
        if g.sink_count() != sinks {
            return Err(parse_err(n, format!("term has {} sinks, expected {sinks}", g.sink_count())));
        }
        out.add_term(&g, c);
    }
    Ok(out)
}

enum Head {
    Vertex(Vec<char>),
    Sink(usize),
}

fn parse_term(line: &str, n: usize) -> Result<(KontsevichGraph, Rational)> {
    let mut tokens = line.split_whitespace();
    let coef_tok = tokens.next().ok_or_else(|| parse_err(n, "missing coefficient"))?;
    let coef = parse_rational(coef_tok.strip_prefix('+').unwrap_or(coef_tok))
        .ok_or_else(|| parse_err(n, format!("bad coefficient {coef_tok:?}")))?;
    let mut factors: Vec<(Vec<char>, Head)> = Vec::new();
    let mut derivs = Vec::new();
    for tok in tokens {
        if let Some(x) = tok.strip_prefix("d_") {
            derivs.push(single_char(x, n)?);
        } else if let Some(rest) = tok.strip_prefix("P^").or_else(|| tok.strip_prefix("J^")) {
            let names: Vec<char> = rest
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| parse_err(n, format!("expected braces in {tok:?}")))?
                .chars()
                .collect();
            let want = if tok.starts_with('J') { 3 } else { 2 };
            if names.len() != want {
                return Err(parse_err(n, format!("{tok:?} needs {want} indices")));
            }
            factors.push((std::mem::take(&mut derivs), Head::Vertex(names)));
        } else if let Some(s) = SINK_NAMES.iter().position(|c| tok.len() == 1 && tok.starts_with(*c)) {
            factors.push((std::mem::take(&mut derivs), Head::Sink(s)));
        } else {
            return Err(parse_err(n, format!("unexpected token {tok:?}")));
        }
    }
    if !derivs.is_empty() {
        return Err(parse_err(n, "derivatives at the end of a term act on nothing"));
    }
    let mut sink_seen = [false; 3];
    for (_, h) in &factors {
        if let Head::Sink(s) = h {
            if std::mem::replace(&mut sink_seen[*s], true) {
                return Err(parse_err(n, format!("sink {} appears twice", SINK_NAMES[*s])));
            }
        }
    }
    let k = sink_seen.iter().take_while(|&&b| b).count();
    if sink_seen[k..].iter().any(|&b| b) {
        return Err(parse_err(n, "sinks must be f, g, h in order of use"));
    }
    // vertex numbering: sinks first, then P/J factors in order of appearance
    let mut vertex_of = Vec::with_capacity(factors.len());
    let mut next = k;
    for (_, h) in &factors {
        vertex_of.push(match h {
            Head::Sink(s) => *s,
            Head::Vertex(_) => {
                next += 1;
                next - 1
            }
        });
    }
    let mut target: HashMap<char, usize> = HashMap::new();
    for (f, (ds, _)) in factors.iter().enumerate() {
        for &d in ds {
            if target.insert(d, vertex_of[f]).is_some() {
                return Err(parse_err(n, format!("index {d} is differentiated twice")));
            }
        }
    }
    let mut upper_seen = std::collections::HashSet::new();
    for (_, h) in &factors {
        if let Head::Vertex(names) = h {
            for &c in names {
                if !upper_seen.insert(c) {
                    return Err(parse_err(n, format!("index {c} is an upper index twice")));
                }
            }
        }
    }
    let mut nodes = Vec::new();
    let mut used = 0;
    for (_, h) in &factors {
        if let Head::Vertex(names) = h {
            let t: Vec<usize> = names
                .iter()
                .map(|c| target.get(c).copied().ok_or_else(|| parse_err(n, format!("index {c} is never differentiated"))))
                .collect::<Result<_>>()?;
            used += t.len();
            nodes.push(if t.len() == 3 { Node::jacobiator(t[0], t[1], t[2]) } else { Node::wedge(t[0], t[1]) });
        }
    }
    if used != target.len() {
        return Err(parse_err(n, "a differentiated index is not an upper index"));
    }
    let g = KontsevichGraph::new(k, nodes).map_err(|e| parse_err(n, e.to_string()))?;
    Ok((g, coef))
}

fn single_char(s: &str, n: usize) -> Result<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(parse_err(n, format!("index names are single characters, got {s:?}"))),
    }
}
