use graphflow::complex::{bracket, enumerate_graphs, insert_at_labeled, Limits};
use graphflow::endo::{nr_bracket, Endomorphism};
use graphflow::graph::{GraphSum, UnorientedGraph};
use graphflow::orient::{jacobiator_graphs, orient, schouten_bracket_graphs};
use graphflow::oriented::{KontsevichGraph, OrientedSum};
use graphflow::rational::int;
use graphflow::superpoly::{evaluate_formal, or_eval, pi_s, schouten, SuperPolynomial};

mod common;
use common::gamma3;

fn mv(func: u8, degree: usize, dim: usize) -> SuperPolynomial {
    SuperPolynomial::formal_multivector(func, degree, dim)
}

fn neg(p: &SuperPolynomial) -> SuperPolynomial {
    p.scale(&int(-1))
}

#[test]
fn stick_acts_as_signed_schouten_bracket() {
    let r = 3;
    for d1 in 0..=3 {
        for d2 in 0..=3 {
            let (a, b) = (mv(0, d1, r), mv(1, d2, r));
            let lhs = or_eval(&UnorientedGraph::stick(), &[a.clone(), b.clone()]).unwrap();
            let s = schouten(&a, &b).unwrap();
            // shifted degree of a is d1 − 1
            let rhs = if d1 % 2 == 1 { s } else { neg(&s) };
            assert_eq!(lhs, rhs, "degrees {d1}, {d2}");
        }
    }
}

#[test]
fn jacobiator_of_formal_bivector_in_3d() {
    // [[P,P]] = 2 Σ_cyc Σ_l P^{l a} ∂_l P^{bc} ξ₁ξ₂ξ₃ with P^{la} = −P^{al}
    let r = 3;
    let p = SuperPolynomial::formal_bivector(r);
    let mut cyc = SuperPolynomial::zero(r);
    for (a, b, c) in [(0u8, 1u8, 2u8), (1, 2, 0), (2, 0, 1)] {
        for l in 0..3u8 {
            let t = SuperPolynomial::jet(r, 0, &[l, a], &[]).mul(&SuperPolynomial::jet(r, 0, &[b, c], &[l]));
            cyc = cyc.add(&t);
        }
    }
    let vol = SuperPolynomial::xi(r, 0).mul(&SuperPolynomial::xi(r, 1)).mul(&SuperPolynomial::xi(r, 2));
    let expect = cyc.mul(&vol).scale(&int(2));
    let j = schouten(&p, &p).unwrap();
    assert!(!j.is_zero());
    assert!(j == expect || j == neg(&expect), "{j}");
}

#[test]
fn schouten_graded_antisymmetry_and_jacobi() {
    let r = 3;
    let shifted = |d: usize| (d + 1) % 2;
    for (da, db, dc) in [(1, 1, 2), (2, 2, 1), (1, 2, 3), (2, 3, 2), (0, 2, 1)] {
        let (a, b, c) = (mv(0, da, r), mv(1, db, r), mv(2, dc, r));
        let ab = schouten(&a, &b).unwrap();
        let ba = schouten(&b, &a).unwrap();
        let s = shifted(da) * shifted(db) % 2;
        assert_eq!(ab, if s == 1 { ba.clone() } else { neg(&ba) }, "antisymmetry {da} {db}");
        let lhs = schouten(&a, &schouten(&b, &c).unwrap()).unwrap();
        let t1 = schouten(&ab, &c).unwrap();
        let t2 = schouten(&b, &schouten(&a, &c).unwrap()).unwrap();
        let rhs = if s == 1 { t1.sub(&t2) } else { t1.add(&t2) };
        assert_eq!(lhs, rhs, "Jacobi {da} {db} {dc}");
    }
    let f = mv(0, 0, r);
    let g = mv(1, 0, r);
    assert!(schouten(&f, &g).unwrap().is_zero());
}

#[test]
fn graph_bracket_matches_coordinate_bracket_on_formal_bivector() {
    let r = 3;
    let wedge = OrientedSum::from_graph(&KontsevichGraph::wedge());
    let p = evaluate_formal(&wedge, r).unwrap();
    assert_eq!(p, SuperPolynomial::formal_bivector(r));
    let q = orient(&gamma3()).unwrap();
    let qv = evaluate_formal(&q, r).unwrap();
    let via_graphs = evaluate_formal(&schouten_bracket_graphs(&wedge, &q).unwrap(), r).unwrap();
    assert_eq!(via_graphs, schouten(&p, &qv).unwrap());
    assert_eq!(evaluate_formal(&jacobiator_graphs(), r).unwrap(), schouten(&p, &p).unwrap());
    // a bracket of oriented sums in the other order
    let back = evaluate_formal(&schouten_bracket_graphs(&q, &wedge).unwrap(), r).unwrap();
    assert_eq!(back, schouten(&qv, &p).unwrap());
}

#[test]
fn orientation_matches_direct_evaluation_of_the_graph() {
    // or(γ₃)(P,P,P,P) by the edge operators equals the value of its Kontsevich graphs
    let r = 3;
    let p = SuperPolynomial::formal_bivector(r);
    let gamma = gamma3();
    let (g, c) = gamma.iter().next().unwrap();
    let direct = or_eval(g, &vec![p.clone(); g.vertex_count()]).unwrap().scale(c);
    assert!(!direct.is_zero());
    assert_eq!(direct, evaluate_formal(&orient(&gamma).unwrap(), r).unwrap());
    // reversing the order of two edges flips the sign
    let g = UnorientedGraph::new(4, vec![(1, 0), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let swapped = g.permute_edges(&[1, 0, 2, 3, 4, 5]);
    let args = vec![p.clone(); 4];
    assert_eq!(or_eval(&g, &args).unwrap(), neg(&or_eval(&swapped, &args).unwrap()));
}

fn small_graphs(max_vertices: usize) -> Vec<UnorientedGraph> {
    (1..=max_vertices)
        .flat_map(|n| (0..=n * (n - 1) / 2).flat_map(move |e| enumerate_graphs(n, e, false, Limits::default()).unwrap()))
        .collect()
}

fn args(degrees: &[usize], count: usize, r: usize) -> Vec<SuperPolynomial> {
    (0..count).map(|s| mv(s as u8, degrees[s % degrees.len()], r)).collect()
}

#[test]
fn orientation_respects_insertions() {
    let r = 2;
    let graphs = small_graphs(3);
    let mut checked = 0;
    for a in &graphs {
        for b in &graphs {
            if a.vertex_count() + b.vertex_count() > 4 {
                continue;
            }
            for i in 0..b.vertex_count() {
                // labelled graphs: canonicalization would permute the arguments
                let n = a.vertex_count() + b.vertex_count() - 1;
                let labeled = insert_at_labeled(a, b, i).unwrap();
                let endo_side =
                    Endomorphism::insert_at(&Endomorphism::from_graph(a), &Endomorphism::from_graph(b), i).unwrap();
                for degs in [[1, 2, 0, 1], [2, 1, 1, 0], [1, 1, 1, 1]] {
                    let x = args(&degs, n, r);
                    let mut graph_side = SuperPolynomial::zero(r);
                    for g in &labeled {
                        graph_side = graph_side.add(&or_eval(g, &x).unwrap());
                    }
                    assert_eq!(graph_side, endo_side.apply(&x).unwrap(), "{a} into {b} at {i}");
                }
                checked += 1;
            }
        }
    }
    assert!(checked >= 20, "{checked}");
}

#[test]
fn orientation_is_a_lie_morphism_on_small_graphs() {
    let r = 3;
    let graphs = small_graphs(2);
    for a in &graphs {
        for b in &graphs {
            let k = a.vertex_count() + b.vertex_count() - 1;
            let deg = -((a.edge_count() + b.edge_count()) as i32);
            let br = bracket(&GraphSum::from_graph(a), &GraphSum::from_graph(b));
            let lhs = Endomorphism::from_graph_sum(&br, k, deg).skew();
            let rhs = nr_bracket(&Endomorphism::orientation(a), &Endomorphism::orientation(b));
            let x = args(&[1, 2, 0, 3], k, r);
            assert_eq!(lhs.apply(&x).unwrap(), rhs.apply(&x).unwrap(), "[{a}, {b}]");
        }
    }
}

#[test]
fn schouten_operator_squares_to_zero() {
    let pi = Endomorphism::schouten();
    let sq = nr_bracket(&pi, &pi);
    assert_eq!(sq.arity(), 3);
    assert_eq!(sq.degree(), -2);
    for degs in [[1, 2, 2], [2, 2, 2], [0, 1, 3], [3, 1, 2]] {
        let x = args(&degs, 3, 3);
        assert!(sq.apply(&x).unwrap().is_zero(), "{degs:?}");
    }
    // the symmetrized stick is π_S
    let stick = Endomorphism::orientation(&UnorientedGraph::stick());
    for degs in [[1, 2], [2, 2], [0, 3]] {
        let x = args(&degs, 2, 3);
        assert_eq!(stick.apply(&x).unwrap(), pi.apply(&x).unwrap());
        assert_eq!(pi.apply(&x).unwrap(), pi_s(&x[0], &x[1]).unwrap());
    }
}

#[test]
fn nijenhuis_richardson_jacobi_identity() {
    let r = 2;
    let pi = Endomorphism::schouten();
    let wedge = Endomorphism::new(2, 0, |x| Ok(x[0].mul(&x[1])));
    let d0 = Endomorphism::new(1, 0, |x| Ok(x[0].dx(0)));
    let triangle = Endomorphism::orientation(&UnorientedGraph::new(2, vec![(0, 1)]).unwrap());
    let cases = [(&pi, &wedge, &d0), (&wedge, &pi, &pi), (&pi, &triangle, &wedge), (&d0, &pi, &wedge)];
    for (a, b, c) in cases {
        let lhs = nr_bracket(a, &nr_bracket(b, c));
        let t1 = nr_bracket(&nr_bracket(a, b), c);
        let t2 = nr_bracket(b, &nr_bracket(a, c));
        let odd = (a.degree() * b.degree()).rem_euclid(2) == 1;
        let n = lhs.arity();
        for degs in [[1, 2, 0, 2], [2, 1, 1, 0]] {
            let x = args(&degs, n, r);
            let l = lhs.apply(&x).unwrap();
            let (u, v) = (t1.apply(&x).unwrap(), t2.apply(&x).unwrap());
            assert_eq!(l, if odd { u.sub(&v) } else { u.add(&v) }, "degrees {} {} {}", a.degree(), b.degree(), c.degree());
        }
    }
}

#[test]
fn sign_oracle_agrees_with_symbolic_expansion() {
    use graphflow::orient::{orient_labeled, sign_oracle};
    let r = 3;
    let p = SuperPolynomial::formal_bivector(r);
    // the stick gives a tri-vector; every term's value is checked together
    let stick = UnorientedGraph::stick();
    let s = orient_labeled(&stick).unwrap();
    assert_eq!(s.sink_count(), 3);
    assert_eq!(evaluate_formal(&s, r).unwrap(), or_eval(&stick, &[p.clone(), p.clone()]).unwrap());
    for (t, c) in s.iter() {
        assert_eq!(&sign_oracle(t, &stick).unwrap(), c);
    }
    // an odd edge permutation flips every coefficient
    let (g, _) = gamma3().iter().next().map(|(g, c)| (g.clone(), c.clone())).unwrap();
    let swapped = g.permute_edges(&[1, 0, 2, 3, 4, 5]);
    let a = orient_labeled(&g).unwrap();
    let b = orient_labeled(&swapped).unwrap();
    assert_eq!(a, b.scale(&int(-1)));
    for (t, c) in a.iter() {
        assert_eq!(sign_oracle(t, &swapped).unwrap(), -c.clone());
    }
    assert!(sign_oracle(&KontsevichGraph::wedge(), &g).is_err());
}
