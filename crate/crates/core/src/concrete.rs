//! Exact polynomial multivector fields and the evaluation of graph sums at
//! a concrete bi-vector.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::canon::sort_parity;
use crate::error::{parse_err, Error, Result};
use crate::oriented::{KontsevichGraph, OrientedSum};
use crate::rational::{factorial, format_rational, int, parse_rational, Rational};

/// A polynomial in `x1, …, xn` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(x) => x + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// `∂/∂x_{i+1}`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * int(e[i] as i64));
        }
        out
    }

    /// Random polynomial of total degree at most `degree` with small integer coefficients.
    pub fn random<R: Rng>(nvars: usize, degree: u32, rng: &mut R) -> Poly {
        let mut p = Poly::zero(nvars);
        for e in monomials(nvars, degree) {
            if rng.gen_bool(0.5) {
                p.add_term(e, int(rng.gen_range(-3..=3)));
            }
        }
        p
    }

    /// Parses sums of products such as `3/2*x1^2*x3 - x2 + 1`, with parentheses.
    pub fn parse(text: &str, nvars: usize) -> std::result::Result<Poly, String> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let p = parse_sum(&tokens, &mut pos, nvars)?;
        if pos != tokens.len() {
            return Err(format!("unexpected token {:?}", tokens[pos]));
        }
        Ok(p)
    }
}

fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for d in 0..=degree {
        for mut rest in monomials(nvars - 1, degree - d) {
            rest.insert(0, d);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Var(usize),
    Op(char),
}

fn tokenize(text: &str) -> std::result::Result<Vec<Tok>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse_rational(&s).ok_or_else(|| format!("bad number {s}"))?));
        } else if c == 'x' {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n: usize = s.parse().map_err(|_| "expected variable index after x".to_string())?;
            if n == 0 {
                return Err("variables are numbered from x1".into());
            }
            out.push(Tok::Var(n - 1));
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

fn parse_sum(t: &[Tok], pos: &mut usize, n: usize) -> std::result::Result<Poly, String> {
    let mut negate = false;
    if let Some(Tok::Op(c @ ('+' | '-'))) = t.get(*pos) {
        negate = *c == '-';
        *pos += 1;
    }
    let mut acc = parse_product(t, pos, n)?;
    if negate {
        acc = acc.scale(&-Rational::one());
    }
    while let Some(Tok::Op(c @ ('+' | '-'))) = t.get(*pos) {
        let minus = *c == '-';
        *pos += 1;
        let p = parse_product(t, pos, n)?;
        acc = if minus { acc.sub(&p) } else { acc.add(&p) };
    }
    Ok(acc)
}

fn parse_product(t: &[Tok], pos: &mut usize, n: usize) -> std::result::Result<Poly, String> {
    let mut acc = parse_power(t, pos, n)?;
    loop {
        match t.get(*pos) {
            Some(Tok::Op('*')) => {
                *pos += 1;
                acc = acc.mul(&parse_power(t, pos, n)?);
            }
            // implicit product, e.g. `2x1` or `x1 x2`
            Some(Tok::Var(_)) | Some(Tok::Num(_)) | Some(Tok::Op('(')) => {
                acc = acc.mul(&parse_power(t, pos, n)?);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_power(t: &[Tok], pos: &mut usize, n: usize) -> std::result::Result<Poly, String> {
    let base = match t.get(*pos) {
        Some(Tok::Num(c)) => {
            *pos += 1;
            Poly::constant(n, c.clone())
        }
        Some(Tok::Var(i)) => {
            *pos += 1;
            if *i >= n {
                return Err(format!("variable x{} outside dimension {n}", i + 1));
            }
            Poly::var(n, *i)
        }
        Some(Tok::Op('(')) => {
            *pos += 1;
            let p = parse_sum(t, pos, n)?;
            if t.get(*pos) != Some(&Tok::Op(')')) {
                return Err("missing )".into());
            }
            *pos += 1;
            p
        }
        other => return Err(format!("unexpected {other:?}")),
    };
    if let Some(Tok::Op('^')) = t.get(*pos) {
        *pos += 1;
        let Some(Tok::Num(e)) = t.get(*pos) else {
            return Err("expected exponent".into());
        };
        *pos += 1;
        if !e.is_integer() || e.is_negative() {
            return Err("exponent must be a non-negative integer".into());
        }
        let e: u32 = e.to_integer().try_into().map_err(|_| "exponent too large".to_string())?;
        let mut p = Poly::constant(n, Rational::one());
        for _ in 0..e {
            p = p.mul(&base);
        }
        return Ok(p);
    }
    Ok(base)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(i, &d)| if d == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, d) })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&a), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A multivector field `Σ A^{a₁<…<a_d}(x) ξ_{a₁}⋯ξ_{a_d}` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteMultivector {
    dim: usize,
    terms: BTreeMap<u64, Poly>,
}

impl ConcreteMultivector {
    pub fn zero(dim: usize) -> Self {
        ConcreteMultivector { dim, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Components keyed by increasing index lists (0-based).
    pub fn components(&self) -> impl Iterator<Item = (Vec<usize>, &Poly)> {
        self.terms.iter().map(|(m, p)| ((0..64).filter(|b| m >> b & 1 == 1).collect(), p))
    }

    /// The coefficient of `ξ_{a₁}⋯ξ_{a_d}` for any order of the indices.
    pub fn component(&self, idx: &[usize]) -> Poly {
        if (1..idx.len()).any(|i| idx[..i].contains(&idx[i])) {
            return Poly::zero(self.dim);
        }
        let mask = idx.iter().fold(0u64, |acc, &i| acc | 1 << i);
        match self.terms.get(&mask) {
            Some(p) if sort_parity(idx) > 0 => p.clone(),
            Some(p) => p.scale(&-Rational::one()),
            None => Poly::zero(self.dim),
        }
    }

    fn add_term(&mut self, mask: u64, p: Poly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&mask) {
            Some(q) => q.add(&p),
            None => p,
        };
        if !sum.is_zero() {
            self.terms.insert(mask, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, p) in &o.terms {
            out.add_term(*m, p.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, p) in &self.terms {
            out.add_term(*m, p.scale(c));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (ma, pa) in &self.terms {
            for (mb, pb) in &o.terms {
                if ma & mb != 0 {
                    continue;
                }
                let swaps: u32 = (0..64).filter(|j| mb >> j & 1 == 1).map(|j| (ma >> j).count_ones()).sum();
                let p = pa.mul(pb);
                out.add_term(ma | mb, if swaps % 2 == 0 { p } else { p.scale(&-Rational::one()) });
            }
        }
        out
    }

    fn map_terms(&self, f: impl Fn(u64, &Poly) -> Option<(u64, Poly)>) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, p) in &self.terms {
            if let Some((m2, p2)) = f(*m, p) {
                out.add_term(m2, p2);
            }
        }
        out
    }

    pub fn dx(&self, l: usize) -> Self {
        self.map_terms(|m, p| Some((m, p.derivative(l))))
    }

    pub fn dxi(&self, l: usize) -> Self {
        self.map_terms(|m, p| {
            (m >> l & 1 == 1).then(|| {
                let before = (m & ((1 << l) - 1)).count_ones();
                (m & !(1 << l), if before % 2 == 0 { p.clone() } else { p.scale(&-Rational::one()) })
            })
        })
    }

    pub fn dxi_right(&self, l: usize) -> Self {
        self.map_terms(|m, p| {
            (m >> l & 1 == 1).then(|| {
                let after = (m >> l >> 1).count_ones();
                (m & !(1 << l), if after % 2 == 0 { p.clone() } else { p.scale(&-Rational::one()) })
            })
        })
    }

    /// The Schouten bracket in coordinates.
    pub fn schouten(&self, o: &Self) -> Result<Self> {
        if self.dim != o.dim {
            return Err(Error::DimensionMismatch(self.dim, o.dim));
        }
        let mut out = Self::zero(self.dim);
        for l in 0..self.dim {
            out = out.add(&self.dxi_right(l).mul(&o.dx(l)));
            out = out.sub(&self.dx(l).mul(&o.dxi(l)));
        }
        Ok(out)
    }
}

/// A bi-vector `P = Σ_{i<j} P^{ij}(x) ξ_i ξ_j` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteBivector {
    dim: usize,
    entries: BTreeMap<(usize, usize), Poly>,
}

impl ConcreteBivector {
    pub fn new(dim: usize) -> Self {
        ConcreteBivector { dim, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets `P^{ij}` (0-based, `i ≠ j`); `P^{ji}` follows by antisymmetry.
    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert!(i != j && i < self.dim && j < self.dim);
        let (key, p) = if i < j { ((i, j), p) } else { ((j, i), p.scale(&-Rational::one())) };
        if p.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, p);
        }
    }

    /// `P^{ij}` for any `i, j`.
    pub fn entry(&self, i: usize, j: usize) -> Poly {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Poly::zero(self.dim),
            Less => self.entries.get(&(i, j)).cloned().unwrap_or_else(|| Poly::zero(self.dim)),
            Greater => self.entry(j, i).scale(&-Rational::one()),
        }
    }

    pub fn to_multivector(&self) -> ConcreteMultivector {
        let mut m = ConcreteMultivector::zero(self.dim);
        for (&(i, j), p) in &self.entries {
            m.add_term(1 << i | 1 << j, p.clone());
        }
        m
    }

    /// `[[P,P]]`.
    pub fn jacobiator(&self) -> ConcreteMultivector {
        let m = self.to_multivector();
        m.schouten(&m).expect("same dimension")
    }

    pub fn is_poisson(&self) -> bool {
        self.jacobiator().is_zero()
    }

    /// The Jacobian structure `P^{ij} = ε^{ijk} ∂_k a` in three dimensions.
    pub fn nambu(a: &Poly) -> Self {
        assert_eq!(a.nvars(), 3);
        let mut p = ConcreteBivector::new(3);
        p.set(0, 1, a.derivative(2));
        p.set(1, 2, a.derivative(0));
        p.set(2, 0, a.derivative(1));
        p
    }

    pub fn random<R: Rng>(dim: usize, degree: u32, rng: &mut R) -> Self {
        let mut p = ConcreteBivector::new(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                p.set(i, j, Poly::random(dim, degree, rng));
            }
        }
        p
    }

    /// Text form: the dimension, then lines `i j <polynomial>` with 1-based indices.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (n, first) = lines.next().ok_or_else(|| parse_err(1, "missing dimension"))?;
        let dim: usize = first.parse().map_err(|_| parse_err(n, "expected the dimension"))?;
        if dim == 0 || dim > 64 {
            return Err(parse_err(n, "dimension must be between 1 and 64"));
        }
        let mut p = ConcreteBivector::new(dim);
        for (n, line) in lines {
            let mut parts = line.splitn(3, char::is_whitespace);
            let mut index = || -> Result<usize> {
                let t = parts.next().ok_or_else(|| parse_err(n, "expected `i j <polynomial>`"))?;
                match t.parse::<usize>() {
                    Ok(i) if (1..=dim).contains(&i) => Ok(i - 1),
                    _ => Err(parse_err(n, format!("index {t:?} outside 1..{dim}"))),
                }
            };
            let i = index()?;
            let j = index()?;
            if i == j {
                return Err(parse_err(n, "diagonal entries vanish"));
            }
            let poly = parts.next().ok_or_else(|| parse_err(n, "missing polynomial"))?;
            p.set(i, j, Poly::parse(poly, dim).map_err(|m| parse_err(n, m))?);
        }
        Ok(p)
    }

    pub fn format(&self) -> String {
        let mut s = format!("{}\n", self.dim);
        for (&(i, j), p) in &self.entries {
            s.push_str(&format!("{} {} {}\n", i + 1, j + 1, p));
        }
        s
    }
}

struct JetCache<'a> {
    p: &'a ConcreteBivector,
    jac: ConcreteMultivector,
    cache: HashMap<(bool, Vec<usize>, Vec<usize>), Poly>,
}

impl JetCache<'_> {
    /// `∂_{derivs}` of `P^{ab}` or of the Jacobiator component `J^{abc}`.
    fn get(&mut self, jacobiator: bool, comp: &[usize], derivs: &mut Vec<usize>) -> Poly {
        derivs.sort_unstable();
        let key = (jacobiator, comp.to_vec(), derivs.clone());
        if let Some(p) = self.cache.get(&key) {
            return p.clone();
        }
        let mut p = if jacobiator { self.jac.component(comp) } else { self.p.entry(comp[0], comp[1]) };
        for &d in derivs.iter() {
            p = p.derivative(d);
        }
        self.cache.insert(key, p.clone());
        p
    }
}

/// Value of a graph sum at the concrete bi-vector `P` (Jacobiator vertices
/// carry `[[P,P]]`), as the multivector `(1/k!) Σ A(x^{a₁},…,x^{a_k}) ξ_{a₁}⋯ξ_{a_k}`.
pub fn evaluate_oriented(s: &OrientedSum, p: &ConcreteBivector) -> Result<ConcreteMultivector> {
    let k = s.sink_count();
    let r = p.dim();
    for (g, _) in s.iter() {
        for sink in 0..k {
            let indeg = g.in_edges(sink).len();
            if indeg != 1 {
                return Err(Error::InvalidGraph(format!("sink {sink} has in-degree {indeg}, not a multivector")));
            }
        }
    }
    let needs_jac = s.iter().any(|(g, _)| g.jacobiator_count() > 0);
    let jac = if needs_jac { p.jacobiator() } else { ConcreteMultivector::zero(r) };
    let terms: Vec<(&KontsevichGraph, &Rational)> = s.iter().collect();
    let norm = factorial(k);
    let parts: Vec<ConcreteMultivector> = terms
        .par_iter()
        .map(|&(g, c)| {
            let mut cache = JetCache { p, jac: jac.clone(), cache: HashMap::new() };
            let mut out = ConcreteMultivector::zero(r);
            let mut labels: Vec<Vec<usize>> = g.nodes().iter().map(|n| vec![0; n.arity()]).collect();
            let coef = c / &norm;
            assign(g, 0, r, &mut labels, &mut cache, &coef, &mut out);
            out
        })
        .collect();
    Ok(parts.iter().fold(ConcreteMultivector::zero(r), |acc, x| acc.add(x)))
}

fn assign(
    g: &KontsevichGraph,
    v: usize,
    r: usize,
    labels: &mut Vec<Vec<usize>>,
    cache: &mut JetCache,
    coef: &Rational,
    out: &mut ConcreteMultivector,
) {
    if v == g.internal_count() {
        let k = g.sink_count();
        let mut sink_labels = vec![0; k];
        let mut derivs: Vec<Vec<usize>> = vec![Vec::new(); g.internal_count()];
        for (u, n) in g.nodes().iter().enumerate() {
            for (s, t) in n.targets().enumerate() {
                if t < k {
                    sink_labels[t] = labels[u][s];
                } else {
                    derivs[t - k].push(labels[u][s]);
                }
            }
        }
        if (1..k).any(|i| sink_labels[..i].contains(&sink_labels[i])) {
            return;
        }
        let mut prod = Poly::constant(r, coef.clone());
        for (u, n) in g.nodes().iter().enumerate() {
            let f = cache.get(n.is_jacobiator(), &labels[u], &mut derivs[u]);
            if f.is_zero() {
                return;
            }
            prod = prod.mul(&f);
        }
        if sort_parity(&sink_labels) < 0 {
            prod = prod.scale(&-Rational::one());
        }
        let mask = sink_labels.iter().fold(0u64, |acc, &l| acc | 1 << l);
        out.add_term(mask, prod);
        return;
    }
    let arity = g.nodes()[v].arity();
    let mut choice = vec![0; arity];
    loop {
        if (1..arity).all(|i| !choice[..i].contains(&choice[i])) {
            labels[v].copy_from_slice(&choice);
            assign(g, v + 1, r, labels, cache, coef, out);
        }
        let mut i = 0;
        while i < arity {
            choice[i] += 1;
            if choice[i] < r {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == arity {
            break;
        }
    }
}
