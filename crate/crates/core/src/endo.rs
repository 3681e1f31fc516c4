//! Multilinear endomorphisms of multivectors, their insertions and the
//! Nijenhuis–Richardson bracket, evaluated on explicit arguments.
//!
//! Arguments must be homogeneous in ξ. Koszul signs use the ξ-degree
//! `|p|`: moving an endomorphism of degree `d` past `p` costs
//! `(−1)^{d·|p|}`, swapping `p` and `q` costs `(−1)^{|p|·|q|}`.

use std::sync::Arc;

use crate::canon::signed_permutations;
use crate::error::{Error, Result};
use crate::graph::{GraphSum, UnorientedGraph};
use crate::rational::{factorial, Rational};
use crate::superpoly::{or_eval, pi_s, SuperPolynomial};

type EndoFn = dyn Fn(&[SuperPolynomial]) -> Result<SuperPolynomial> + Send + Sync;

#[derive(Clone)]
pub struct Endomorphism {
    arity: usize,
    degree: i32,
    f: Arc<EndoFn>,
}

fn degree_of(p: &SuperPolynomial) -> Result<usize> {
    if p.is_zero() {
        return Ok(0);
    }
    p.degree().ok_or_else(|| Error::DegreeMismatch("argument is not homogeneous in ξ".into()))
}

fn koszul(degrees: &[usize], perm: &[usize]) -> bool {
    // parity of (−1)^{Σ |p_a||p_b|} over pairs put out of order by `perm`
    let mut odd = false;
    for x in 0..perm.len() {
        for y in x + 1..perm.len() {
            if perm[x] > perm[y] && degrees[perm[x]] % 2 == 1 && degrees[perm[y]] % 2 == 1 {
                odd = !odd;
            }
        }
    }
    odd
}

impl Endomorphism {
    pub fn new(
        arity: usize,
        degree: i32,
        f: impl Fn(&[SuperPolynomial]) -> Result<SuperPolynomial> + Send + Sync + 'static,
    ) -> Self {
        Endomorphism { arity, degree, f: Arc::new(f) }
    }

    pub fn zero(arity: usize, degree: i32) -> Self {
        Endomorphism::new(arity, degree, |args| Ok(SuperPolynomial::zero(args[0].dim())))
    }

    /// `or(γ)`, of degree `−|E(γ)|`.
    pub fn from_graph(g: &UnorientedGraph) -> Self {
        let g = g.clone();
        Endomorphism::new(g.vertex_count(), -(g.edge_count() as i32), move |args| or_eval(&g, args))
    }

    /// `Σ c·or(γ)` over a homogeneous graph sum on `arity` vertices.
    pub fn from_graph_sum(s: &GraphSum, arity: usize, degree: i32) -> Self {
        let terms: Vec<(UnorientedGraph, Rational)> = s.iter().map(|(g, c)| (g.clone(), c.clone())).collect();
        Endomorphism::new(arity, degree, move |args| {
            let mut out = SuperPolynomial::zero(args[0].dim());
            for (g, c) in &terms {
                out = out.add(&or_eval(g, args)?.scale(c));
            }
            Ok(out)
        })
    }

    /// `π_S`.
    pub fn schouten() -> Self {
        Endomorphism::new(2, -1, |args| pi_s(&args[0], &args[1]))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn apply(&self, args: &[SuperPolynomial]) -> Result<SuperPolynomial> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: args.len() });
        }
        (self.f)(args)
    }

    /// `a ∘⃗_i b`: `a` inserted into the i-th argument (0-based) of `b`.
    pub fn insert_at(a: &Endomorphism, b: &Endomorphism, i: usize) -> Result<Endomorphism> {
        if i >= b.arity {
            return Err(Error::IndexOutOfRange { index: i, count: b.arity });
        }
        let (a, b) = (a.clone(), b.clone());
        let arity = a.arity + b.arity - 1;
        let degree = a.degree + b.degree;
        Ok(Endomorphism::new(arity, degree, move |args| {
            let inner = a.apply(&args[i..i + a.arity])?;
            let mut outer: Vec<SuperPolynomial> = args[..i].to_vec();
            outer.push(inner);
            outer.extend_from_slice(&args[i + a.arity..]);
            let passed: usize = args[..i].iter().map(degree_of).sum::<Result<usize>>()?;
            let v = b.apply(&outer)?;
            Ok(if (a.degree.rem_euclid(2) as usize * passed) % 2 == 1 { v.scale(&-Rational::from_integer(1.into())) } else { v })
        }))
    }

    /// `a ∘⃗ b = Σ_i a ∘⃗_i b`.
    pub fn insertion(a: &Endomorphism, b: &Endomorphism) -> Endomorphism {
        let parts: Vec<Endomorphism> =
            (0..b.arity).map(|i| Endomorphism::insert_at(a, b, i).expect("index in range")).collect();
        let arity = a.arity + b.arity - 1;
        Endomorphism::new(arity, a.degree + b.degree, move |args| {
            let mut out = SuperPolynomial::zero(args[0].dim());
            for p in &parts {
                out = out.add(&p.apply(args)?);
            }
            Ok(out)
        })
    }

    /// `[a,b] = a ∘⃗ b − (−1)^{|a||b|} b ∘⃗ a`.
    pub fn commutator(a: &Endomorphism, b: &Endomorphism) -> Endomorphism {
        let ab = Endomorphism::insertion(a, b);
        let ba = Endomorphism::insertion(b, a);
        let odd = (a.degree * b.degree).rem_euclid(2) == 1;
        Endomorphism::new(ab.arity, ab.degree, move |args| {
            let x = ab.apply(args)?;
            let y = ba.apply(args)?;
            Ok(if odd { x.add(&y) } else { x.sub(&y) })
        })
    }

    /// The average of `θ(p_σ(1),…,p_σ(k))` over `σ`, with Koszul signs.
    pub fn skew(&self) -> Endomorphism {
        let theta = self.clone();
        let perms = signed_permutations(self.arity);
        let norm = factorial(self.arity);
        Endomorphism::new(self.arity, self.degree, move |args| {
            let degrees: Vec<usize> = args.iter().map(degree_of).collect::<Result<_>>()?;
            let mut out = SuperPolynomial::zero(args[0].dim());
            for (p, _) in &perms {
                let permuted: Vec<SuperPolynomial> = p.iter().map(|&j| args[j].clone()).collect();
                let v = theta.apply(&permuted)?;
                out = if koszul(&degrees, p) { out.sub(&v) } else { out.add(&v) };
            }
            Ok(out.scale(&(Rational::from_integer(1.into()) / &norm)))
        })
    }

    /// `Or(γ)`: the symmetrization of `or(γ)`.
    pub fn orientation(g: &UnorientedGraph) -> Endomorphism {
        Endomorphism::from_graph(g).skew()
    }
}

/// `[a,b]_NR`, the symmetrization of the graded commutator.
pub fn nr_bracket(a: &Endomorphism, b: &Endomorphism) -> Endomorphism {
    Endomorphism::commutator(a, b).skew()
}
