//! Differential polynomials in formal jets of multivector coefficients,
//! with parity-odd variables `ξ_1, …, ξ_r`.
//!
//! A jet `∂_{a…}A^{b…}` belongs to a formal multivector (or function)
//! identified by `func`; the argument `slot` tags which tensor factor it
//! came from while endomorphisms act on a tensor product of arguments.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::canon::sort_parity;
use crate::error::{Error, Result};
use crate::graph::UnorientedGraph;
use crate::oriented::OrientedSum;
use crate::rational::{factorial, format_rational, Rational};

/// `∂_{derivs} A_func^{comp}` taken in argument `slot`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Jet {
    pub func: u8,
    pub slot: u8,
    /// Strictly increasing component indices.
    pub comp: Vec<u8>,
    /// Non-decreasing derivative indices.
    pub derivs: Vec<u8>,
}

impl Jet {
    /// Normal form of `∂_{derivs} A^{comp}`: components sorted with the
    /// parity of the sorting permutation, `None` if a component repeats.
    pub fn new(func: u8, comp: &[u8], derivs: &[u8]) -> Option<(Jet, i32)> {
        let mut c = comp.to_vec();
        if (1..c.len()).any(|i| c[..i].contains(&c[i])) {
            return None;
        }
        let sign = sort_parity(&c);
        c.sort_unstable();
        let mut d = derivs.to_vec();
        d.sort_unstable();
        Some((Jet { func, slot: 0, comp: c, derivs: d }, sign))
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.derivs {
            write!(f, "d{} ", d + 1)?;
        }
        write!(f, "A{}", self.func)?;
        if !self.comp.is_empty() {
            write!(f, "^")?;
            for c in &self.comp {
                write!(f, "{}", c + 1)?;
            }
        }
        if self.slot != 0 {
            write!(f, "[{}]", self.slot)?;
        }
        Ok(())
    }
}

/// A product of jets and an ascending product of odd variables (bit mask).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub jets: Vec<Jet>,
    pub xi: u64,
}

/// Sign of `ξ_A · ξ_B` relative to the ascending product of `A ∪ B`, or 0 if they meet.
fn xi_product_sign(a: u64, b: u64) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> j).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperPolynomial {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl SuperPolynomial {
    pub fn zero(dim: usize) -> Self {
        SuperPolynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_monomial(Monomial { jets: Vec::new(), xi: 0 }, c);
        p
    }

    /// The odd variable `ξ_ℓ` (0-based).
    pub fn xi(dim: usize, l: usize) -> Self {
        let mut p = Self::zero(dim);
        p.add_monomial(Monomial { jets: Vec::new(), xi: 1 << l }, Rational::one());
        p
    }

    pub fn jet(dim: usize, func: u8, comp: &[u8], derivs: &[u8]) -> Self {
        let mut p = Self::zero(dim);
        if let Some((j, s)) = Jet::new(func, comp, derivs) {
            p.add_monomial(Monomial { jets: vec![j], xi: 0 }, Rational::from_integer(s.into()));
        }
        p
    }

    /// `Σ_{a₁<…<a_d} A^{a₁…a_d}(x) ξ_{a₁}⋯ξ_{a_d}` with formal coefficients.
    pub fn formal_multivector(func: u8, degree: usize, dim: usize) -> Self {
        let mut p = Self::zero(dim);
        for mask in 0u64..1 << dim {
            if mask.count_ones() as usize != degree {
                continue;
            }
            let comp: Vec<u8> = (0..dim as u8).filter(|&i| mask >> i & 1 == 1).collect();
            let (j, _) = Jet::new(func, &comp, &[]).expect("distinct components");
            p.add_monomial(Monomial { jets: vec![j], xi: mask }, Rational::one());
        }
        p
    }

    /// The formal bi-vector `P = Σ_{i<j} P^{ij} ξ_i ξ_j` (function id 0).
    pub fn formal_bivector(dim: usize) -> Self {
        Self::formal_multivector(0, 2, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
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

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The ξ-degree when all terms share it.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.xi.count_ones() as usize);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub(crate) fn add_monomial(&mut self, m: Monomial, c: Rational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_monomial(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.dim);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = Self::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let s = xi_product_sign(ma.xi, mb.xi);
                if s == 0 {
                    continue;
                }
                let mut jets = ma.jets.clone();
                jets.extend(mb.jets.iter().cloned());
                jets.sort();
                let c = ca * cb;
                out.add_monomial(Monomial { jets, xi: ma.xi | mb.xi }, if s > 0 { c } else { -c });
            }
        }
        out
    }

    /// `∂/∂x^ℓ`, acting only on jets of the given argument slot if one is given.
    pub fn dx_in(&self, l: usize, slot: Option<u8>) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            for (i, j) in m.jets.iter().enumerate() {
                if slot.is_some_and(|s| s != j.slot) {
                    continue;
                }
                let mut jets = m.jets.clone();
                let pos = jets[i].derivs.partition_point(|&d| d <= l as u8);
                jets[i].derivs.insert(pos, l as u8);
                jets.sort();
                out.add_monomial(Monomial { jets, xi: m.xi }, c.clone());
            }
        }
        out
    }

    pub fn dx(&self, l: usize) -> Self {
        self.dx_in(l, None)
    }

    /// Left derivative `∂⃗/∂ξ` with respect to the odd variable of bit `id`.
    pub fn dxi(&self, id: usize) -> Self {
        let mut out = Self::zero(self.dim);
        let bit = 1u64 << id;
        for (m, c) in &self.terms {
            if m.xi & bit == 0 {
                continue;
            }
            let before = (m.xi & (bit - 1)).count_ones();
            let c = if before % 2 == 0 { c.clone() } else { -c.clone() };
            out.add_monomial(Monomial { jets: m.jets.clone(), xi: m.xi & !bit }, c);
        }
        out
    }

    /// Right derivative `(·)∂⃖/∂ξ`.
    pub fn dxi_right(&self, id: usize) -> Self {
        let mut out = Self::zero(self.dim);
        let bit = 1u64 << id;
        for (m, c) in &self.terms {
            if m.xi & bit == 0 {
                continue;
            }
            let after = (m.xi >> id >> 1).count_ones();
            let c = if after % 2 == 0 { c.clone() } else { -c.clone() };
            out.add_monomial(Monomial { jets: m.jets.clone(), xi: m.xi & !bit }, c);
        }
        out
    }

    /// Moves every jet into argument `slot` and every `ξ_ℓ` to bit `slot·r + ℓ`.
    fn tagged(&self, slot: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let jets = m.jets.iter().map(|j| Jet { slot: slot as u8, ..j.clone() }).collect();
            out.add_monomial(Monomial { jets, xi: m.xi << (slot * self.dim) }, c.clone());
        }
        out
    }

    /// Ordered multiplication of tagged factors: `ξ` of argument `s` at
    /// bit `s·r + ℓ` becomes `ξ_ℓ`, keeping the factor order; slot tags are dropped.
    fn mult(&self) -> Self {
        let r = self.dim;
        let mut out = Self::zero(r);
        for (m, c) in &self.terms {
            let seq: Vec<usize> = (0..64).filter(|b| m.xi >> b & 1 == 1).map(|b| b % r).collect();
            if (1..seq.len()).any(|i| seq[..i].contains(&seq[i])) {
                continue;
            }
            let sign = sort_parity(&seq);
            let xi = seq.iter().fold(0u64, |acc, &l| acc | 1 << l);
            let mut jets: Vec<Jet> = m.jets.iter().map(|j| Jet { slot: 0, ..j.clone() }).collect();
            jets.sort();
            out.add_monomial(Monomial { jets, xi }, if sign > 0 { c.clone() } else { -c.clone() });
        }
        out
    }

    /// Homogeneous components by ξ-degree.
    pub fn degree_parts(&self) -> BTreeMap<usize, SuperPolynomial> {
        let mut parts: BTreeMap<usize, SuperPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.xi.count_ones() as usize)
                .or_insert_with(|| Self::zero(self.dim))
                .add_monomial(m.clone(), c.clone());
        }
        parts
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, c) in &self.terms {
            let s = format_rational(c);
            if s.starts_with('-') {
                write!(f, "{s}")?;
            } else {
                write!(f, "+{s}")?;
            }
            for j in &m.jets {
                write!(f, " {j}")?;
            }
            for b in 0..64 {
                if m.xi >> b & 1 == 1 {
                    write!(f, " xi{}", b + 1)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The Schouten bracket in coordinates,
/// `[[A,B]] = Σ_ℓ (A)∂⃖/∂ξ_ℓ · ∂⃗/∂x^ℓ(B) − (A)∂⃖/∂x^ℓ · ∂⃗/∂ξ_ℓ(B)`.
pub fn schouten(a: &SuperPolynomial, b: &SuperPolynomial) -> Result<SuperPolynomial> {
    a.check_dim(b)?;
    let mut out = SuperPolynomial::zero(a.dim);
    for l in 0..a.dim {
        out = out.add(&a.dxi_right(l).mul(&b.dx(l)));
        out = out.sub(&a.dx(l).mul(&b.dxi(l)));
    }
    Ok(out)
}

/// `π_S(a,b) = (−1)^{|a|−1}[[a,b]]`, extended over the ξ-degree components of `a`.
pub fn pi_s(a: &SuperPolynomial, b: &SuperPolynomial) -> Result<SuperPolynomial> {
    a.check_dim(b)?;
    let mut out = SuperPolynomial::zero(a.dim);
    for (d, part) in a.degree_parts() {
        let s = schouten(&part, b)?;
        out = if d % 2 == 1 { out.add(&s) } else { out.sub(&s) };
    }
    Ok(out)
}

/// `or(γ)(p₁,…,p_k) = mult_k(∏ Δ_ij (p₁⊗…⊗p_k))`, the first edge of `E(γ)` acting first.
pub fn or_eval(g: &UnorientedGraph, args: &[SuperPolynomial]) -> Result<SuperPolynomial> {
    if args.len() != g.vertex_count() {
        return Err(Error::ArityMismatch { expected: g.vertex_count(), got: args.len() });
    }
    let Some(first) = args.first() else {
        return Ok(SuperPolynomial::zero(0));
    };
    let r = first.dim;
    for a in args {
        first.check_dim(a)?;
    }
    if r * args.len() > 64 {
        return Err(Error::ResourceBound(format!("{} arguments in dimension {r}", args.len())));
    }
    let mut t = SuperPolynomial::constant(r, Rational::one());
    for (i, a) in args.iter().enumerate() {
        t = t.mul(&a.tagged(i));
    }
    for &(i, j) in g.edges() {
        let mut next = SuperPolynomial::zero(r);
        for l in 0..r {
            next = next.add(&t.dxi(i * r + l).dx_in(l, Some(j as u8)));
            next = next.add(&t.dx_in(l, Some(i as u8)).dxi(j * r + l));
        }
        t = next;
    }
    Ok(t.mult())
}

/// The multivector encoded by a graph sum, with formal `P` (function id 0)
/// in every wedge vertex and a formal tri-vector (id 1) in Jacobiator vertices:
/// `(1/k!) Σ` over all edge labels of the jet product times `ξ_{a₁}⋯ξ_{a_k}`,
/// `a_s` the label of the edge into sink `s`.
pub fn evaluate_formal(s: &OrientedSum, dim: usize) -> Result<SuperPolynomial> {
    let k = s.sink_count();
    let mut out = SuperPolynomial::zero(dim);
    for (g, c) in s.iter() {
        let edges: Vec<(usize, usize)> = g
            .nodes()
            .iter()
            .enumerate()
            .flat_map(|(v, n)| n.targets().map(move |t| (v + k, t)))
            .collect();
        for sink in 0..k {
            let indeg = edges.iter().filter(|e| e.1 == sink).count();
            if indeg != 1 {
                return Err(Error::InvalidGraph(format!("sink {sink} has in-degree {indeg}, not a multivector")));
            }
        }
        let total = dim.pow(edges.len() as u32);
        let coef = c / factorial(k);
        for mut code in 0..total {
            let mut labels = vec![0u8; edges.len()];
            for l in labels.iter_mut() {
                *l = (code % dim) as u8;
                code /= dim;
            }
            let mut sign = 1;
            let mut jets = Vec::with_capacity(g.internal_count());
            let mut ok = true;
            let mut e = 0;
            for (v, n) in g.nodes().iter().enumerate() {
                let comp: Vec<u8> = labels[e..e + n.arity()].to_vec();
                e += n.arity();
                let derivs: Vec<u8> =
                    edges.iter().zip(&labels).filter(|(ed, _)| ed.1 == v + k).map(|(_, &l)| l).collect();
                match Jet::new(if n.is_jacobiator() { 1 } else { 0 }, &comp, &derivs) {
                    Some((j, s)) => {
                        sign *= s;
                        jets.push(j);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let seq: Vec<u8> = (0..k)
                .map(|sink| labels[edges.iter().position(|ed| ed.1 == sink).expect("in-degree 1")])
                .collect();
            if (1..seq.len()).any(|i| seq[..i].contains(&seq[i])) {
                continue;
            }
            sign *= sort_parity(&seq);
            let xi = seq.iter().fold(0u64, |acc, &l| acc | 1 << l);
            jets.sort();
            out.add_monomial(Monomial { jets, xi }, if sign > 0 { coef.clone() } else { -coef.clone() });
        }
    }
    Ok(out)
}
