use graphflow::complex::{bracket, differential};
use graphflow::concrete::{ConcreteBivector, Poly};
use graphflow::diffpoly::{parse_diff_poly, print_diff_poly};
use graphflow::graph::{canonicalize, format_graph_sum, parse_graph_sum, GraphSum, UnorientedGraph};
use graphflow::orient::orient;
use graphflow::oriented::{format_oriented_sum, parse_oriented_sum, reduce_mod_skew, KontsevichGraph, Node, OrientedSum};
use graphflow::rational::{frac, int, Rational};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// A simple graph on `1..=max_n` vertices with edges in random order and direction.
fn graph(max_n: usize) -> impl Strategy<Value = UnorientedGraph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let all = pairs(n);
            let len = all.len();
            (Just(n), subsequence(all, 0..=len))
        })
        .prop_flat_map(|(n, edges)| {
            let m = edges.len();
            (Just(n), Just(edges).prop_shuffle(), proptest::collection::vec(any::<bool>(), m))
        })
        .prop_map(|(n, edges, flips)| {
            let edges = edges.into_iter().zip(flips).map(|((a, b), f)| if f { (b, a) } else { (a, b) }).collect();
            UnorientedGraph::new(n, edges).unwrap()
        })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn parity(p: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Brute force: a graph vanishes iff some vertex permutation preserves
/// its edge set while permuting the edges oddly.
fn has_odd_automorphism(g: &UnorientedGraph) -> bool {
    let n = g.vertex_count();
    let key = |(a, b): (usize, usize)| (a.min(b), a.max(b));
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|&e| key(e)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let image: Option<Vec<usize>> = edges
            .iter()
            .map(|&(a, b)| edges.iter().position(|&e| e == key((perm[a], perm[b]))))
            .collect();
        if let Some(img) = image {
            if parity(&img) < 0 {
                return true;
            }
        }
        // next permutation in lexicographic order
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return false;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

fn coef() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_filter("nonzero", |(p, _)| *p != 0).prop_map(|(p, q)| frac(p, q))
}

fn graph_sum(max_n: usize, max_terms: usize) -> impl Strategy<Value = GraphSum> {
    proptest::collection::vec((coef(), graph(max_n)), 0..=max_terms).prop_map(|terms| {
        let mut s = GraphSum::new();
        for (c, g) in terms {
            s.add_term(&g, c);
        }
        s
    })
}

/// A Kontsevich graph with two sinks and `n` wedge vertices.
fn kontsevich(max_n: usize) -> impl Strategy<Value = KontsevichGraph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let total = n + 2;
            proptest::collection::vec((0..total, 0..total), n).prop_map(move |t| (n, t))
        })
        .prop_filter_map("loops or double edges", |(n, targets)| {
            let nodes: Vec<Node> = targets.iter().map(|&(a, b)| Node::wedge(a, b)).collect();
            let _ = n;
            KontsevichGraph::new(2, nodes).ok()
        })
}

fn oriented_terms(max_terms: usize) -> impl Strategy<Value = Vec<(KontsevichGraph, Rational)>> {
    proptest::collection::vec((kontsevich(4), coef()), 0..=max_terms)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn canonical_form_ignores_vertex_labels(g in graph(6), seed in any::<u64>()) {
        let n = g.vertex_count();
        let mut p: Vec<usize> = (0..n).collect();
        let mut x = seed;
        for i in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            p.swap(i, (x >> 33) as usize % (i + 1));
        }
        let h = g.relabel(&p);
        prop_assert_eq!(canonicalize(&g).graph, canonicalize(&h).graph);
        prop_assert_eq!(GraphSum::from_graph(&g), GraphSum::from_graph(&h));
    }

    #[test]
    fn edge_permutations_act_by_their_sign(g in graph(6).prop_flat_map(|g| { let m = g.edge_count(); (Just(g), permutation(m)) })) {
        let (g, p) = g;
        let h = g.permute_edges(&p);
        prop_assert_eq!(GraphSum::from_graph(&h), GraphSum::from_graph(&g).scale(&int(parity(&p) as i64)));
    }

    #[test]
    fn zero_graphs_are_those_with_odd_automorphisms(g in graph(5)) {
        prop_assert_eq!(canonicalize(&g).sign == 0, has_odd_automorphism(&g));
    }

    #[test]
    fn differential_squares_to_zero(s in graph_sum(5, 3)) {
        prop_assert!(differential(&differential(&s)).is_empty());
    }

    #[test]
    fn graph_sum_text_round_trip(s in graph_sum(6, 5)) {
        prop_assert_eq!(parse_graph_sum(&format_graph_sum(&s)).unwrap(), s);
    }

    #[test]
    fn reduction_is_idempotent_and_order_free(terms in oriented_terms(6), seed in any::<u64>()) {
        let s = OrientedSum::from_raw_terms(2, terms.clone());
        prop_assert_eq!(&reduce_mod_skew(&s), &s);
        prop_assert_eq!(&reduce_mod_skew(&reduce_mod_skew(&s)), &s);
        let mut shuffled = terms.clone();
        let len = shuffled.len();
        if len > 1 {
            shuffled.rotate_left(seed as usize % len);
            shuffled.reverse();
        }
        prop_assert_eq!(&OrientedSum::from_raw_terms(2, shuffled), &s);
        let mut one_by_one = OrientedSum::new(2);
        for (g, c) in &terms {
            one_by_one.add_term(g, c.clone());
        }
        prop_assert_eq!(&one_by_one, &s);
    }

    #[test]
    fn oriented_text_round_trips(terms in oriented_terms(6)) {
        let s = OrientedSum::from_raw_terms(2, terms);
        let text = format_oriented_sum(&s);
        prop_assert_eq!(&parse_oriented_sum(&text).unwrap(), &s);
        prop_assert_eq!(format_oriented_sum(&parse_oriented_sum(&text).unwrap()), text);
        prop_assert_eq!(&parse_diff_poly(&print_diff_poly(&s)).unwrap(), &s);
    }

    #[test]
    fn bivector_text_round_trips(seed in any::<u64>(), dim in 1usize..=4) {
        use rand::SeedableRng;
        let p = ConcreteBivector::random(dim, 2, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(ConcreteBivector::parse(&p.format()).unwrap(), p);
    }

    #[test]
    fn polynomial_text_round_trips(seed in any::<u64>()) {
        use rand::SeedableRng;
        let p = Poly::random(3, 3, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(Poly::parse(&p.to_string(), 3).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn graded_jacobi_for_graphs(a in graph(4), b in graph(4), c in graph(4)) {
        let (ga, gb, gc) = (GraphSum::from_graph(&a), GraphSum::from_graph(&b), GraphSum::from_graph(&c));
        let lhs = bracket(&ga, &bracket(&gb, &gc));
        let t1 = bracket(&bracket(&ga, &gb), &gc);
        let t2 = bracket(&gb, &bracket(&ga, &gc));
        let odd = a.edge_count() * b.edge_count() % 2 == 1;
        prop_assert_eq!(lhs, if odd { t1.sub(&t2) } else { t1.add(&t2) });
    }

    #[test]
    fn graded_antisymmetry_for_graphs(a in graph(4), b in graph(4)) {
        let (ga, gb) = (GraphSum::from_graph(&a), GraphSum::from_graph(&b));
        let odd = a.edge_count() * b.edge_count() % 2 == 1;
        let ba = bracket(&gb, &ga);
        prop_assert_eq!(bracket(&ga, &gb), if odd { ba } else { ba.scale(&int(-1)) });
    }

    #[test]
    fn orientation_is_skew_in_its_sinks(g in graph(4)) {
        let k = 2 * g.vertex_count() as i64 - g.edge_count() as i64;
        prop_assume!((1..=3).contains(&k));
        let s = orient(&GraphSum::from_graph(&g)).unwrap();
        if k >= 2 {
            let swapped = OrientedSum::from_raw_terms(
                s.sink_count(),
                s.iter().map(|(t, c)| {
                    let mut p: Vec<usize> = (0..s.sink_count()).collect();
                    p.swap(0, 1);
                    (t.permute_sinks(&p), c.clone())
                }).collect(),
            );
            prop_assert_eq!(swapped, s.scale(&int(-1)));
        }
    }
}
