//! Randomized invariants of diagrams, spaces and calculus.

use std::sync::OnceLock;

use num_traits::One;
use proptest::prelude::*;

use crate::calculus::{chi, chi_inverse};
use crate::diagrams::{canonicalize, Diagram, Graph, Signature};
use crate::rational::{q, Q};
use crate::sl2::{sl2_reduce_with, Strategy as Order};
use crate::spaces::{
    dense_rank, enumerate, is_zero_mod, link_relations, local_relations_from, quotient_basis,
    Engine, EngineConfig, Filter, LinComb, StuSign,
};

const SIGNATURES: &[&str] = &[
    "*x",
    "up:x",
    "circle:x",
    "*x,*y",
    "@y",
    "up:x,*y",
    "circle:x,@y",
];

fn engine() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| Engine::new(EngineConfig::default()))
}

fn pool() -> &'static Vec<(Signature, Diagram)> {
    static P: OnceLock<Vec<(Signature, Diagram)>> = OnceLock::new();
    P.get_or_init(|| {
        let mut out = Vec::new();
        for s in SIGNATURES {
            let sig: Signature = s.parse().unwrap();
            for n in 0..=3 {
                for d in enumerate(&sig, n, Filter::All, None).unwrap() {
                    out.push((sig.clone(), d));
                }
            }
        }
        out
    })
}

/// Same diagram with darts renamed, vertices reordered and rotated, and some vertices
/// flipped. Returns the graph and the sign the flips introduce.
fn scramble(g: &Graph, keys: &[u64], rot: &[u8], flips: &[bool]) -> (Graph, i8) {
    let n = g.mate.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&d| keys[d % keys.len()].wrapping_mul(d as u64 + 1));
    let mut to = vec![0u32; n];
    for (new, &old) in order.iter().enumerate() {
        to[old] = new as u32;
    }
    let mut h = Graph::new();
    for _ in 0..n {
        h.dart();
    }
    for d in 0..n {
        h.mate[to[d] as usize] = to[g.mate[d] as usize];
    }
    let mut sign = 1i8;
    let mut tris: Vec<[u32; 3]> = g
        .tri
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let r = rot[i % rot.len()] as usize % 3;
            let mut t = [
                to[t[r] as usize],
                to[t[(r + 1) % 3] as usize],
                to[t[(r + 2) % 3] as usize],
            ];
            if flips[i % flips.len()] {
                t.swap(1, 2);
                sign = -sign;
            }
            t
        })
        .collect();
    tris.sort_by_key(|t| keys[t[0] as usize % keys.len()]);
    h.tri = tris;
    h.legs = g.legs.iter().map(|&(d, a)| (to[d as usize], a)).collect();
    h.legs.sort_by_key(|l| keys[l.0 as usize % keys.len()]);
    h.loops = g.loops;
    (h, sign)
}

fn index() -> impl Strategy<Value = usize> {
    0..pool().len()
}

/// A second diagram with the signature and degree of `pool()[i]`.
fn partner(i: usize, pick: &prop::sample::Index) -> &'static Diagram {
    let (sig, d) = &pool()[i];
    let same: Vec<&Diagram> = pool()
        .iter()
        .filter(|(s, e)| s == sig && e.degree() == d.degree())
        .map(|(_, e)| e)
        .collect();
    same[pick.index(same.len())]
}

fn starred() -> &'static Vec<usize> {
    static S: OnceLock<Vec<usize>> = OnceLock::new();
    S.get_or_init(|| {
        (0..pool().len())
            .filter(|&i| {
                let sig = &pool()[i].0;
                sig.index_of("x")
                    .is_some_and(|c| sig.kind(c) == crate::diagrams::ComponentKind::Asterisk)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn canonical_form_ignores_presentation(
        i in index(),
        keys in prop::collection::vec(any::<u64>(), 1..48),
        rot in prop::collection::vec(0u8..3, 1..8),
        flips in prop::collection::vec(any::<bool>(), 1..8),
    ) {
        let (sig, d) = &pool()[i];
        let (g, sign) = scramble(&d.to_graph(), &keys, &rot, &flips);
        let (c, s) = canonicalize(&g, sig).unwrap().expect("pool diagrams are nonzero");
        prop_assert_eq!(&c, d);
        prop_assert_eq!(s, sign);
        let again = canonicalize(&c.to_graph(), sig).unwrap().unwrap();
        prop_assert_eq!(again, (c, 1));
    }

    #[test]
    fn relations_lie_in_the_kernel(i in index()) {
        let (sig, d) = &pool()[i];
        let qb = quotient_basis(engine(), sig, d.degree(), Filter::All).unwrap();
        for r in local_relations_from(d, sig, StuSign::default()).unwrap() {
            prop_assert!(qb.normal_form(&r.combination).unwrap().is_empty());
        }
    }

    #[test]
    fn normal_form_is_linear(i in index(), pick in any::<prop::sample::Index>(), a in -5i64..5, b in 1i64..5) {
        let (sig, d) = &pool()[i];
        let e = partner(i, &pick);
        let qb = quotient_basis(engine(), sig, d.degree(), Filter::All).unwrap();
        let x = LinComb::from_diagram(sig.clone(), d.clone(), Q::one());
        let y = LinComb::from_diagram(sig.clone(), e.clone(), Q::one());
        let c = q(a, b);
        let lhs = qb.dense(&qb.normal_form(&x.scale(&c).plus(&y).unwrap()).unwrap());
        let nx = qb.dense(&qb.normal_form(&x).unwrap());
        let ny = qb.dense(&qb.normal_form(&y).unwrap());
        let rhs: Vec<Q> = nx.iter().zip(&ny).map(|(u, v)| &c * u + v).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_bookkeeping(s in prop::sample::select(SIGNATURES), n in 0usize..=4, bc in any::<bool>()) {
        let sig: Signature = s.parse().unwrap();
        let f = if bc { Filter::BoundaryConnected } else { Filter::All };
        let qb = quotient_basis(engine(), &sig, n, f).unwrap();
        prop_assert_eq!(qb.rank() + qb.dim(), enumerate(&sig, n, f, None).unwrap().len());
        for k in 0..qb.dim() {
            let v = qb.basis_element(k);
            let nf = qb.normal_form(&v).unwrap();
            prop_assert_eq!(nf.len(), 1);
            prop_assert_eq!(nf.get(&k), Some(&Q::one()));
        }
    }

    #[test]
    fn chi_inverse_undoes_chi(k in any::<prop::sample::Index>(), pick in any::<prop::sample::Index>(), a in -3i64..4) {
        let i = *k.get(starred());
        let (sig, d) = &pool()[i];
        let e = partner(i, &pick);
        let v = LinComb::from_diagram(sig.clone(), d.clone(), q(a, 1))
            .plus(&LinComb::from_diagram(sig.clone(), e.clone(), Q::one()))
            .unwrap();
        let back = chi_inverse(engine(), &chi(&v, "x").unwrap(), "x").unwrap();
        prop_assert!(is_zero_mod(engine(), &back.minus(&v).unwrap()).unwrap());
    }

    #[test]
    fn sl2_rewrite_order_is_irrelevant(n in 1usize..=4, pick in any::<prop::sample::Index>()) {
        let vac = enumerate(&Signature::empty(), n, Filter::All, None).unwrap();
        let d = pick.get(&vac).clone();
        let v = LinComb::from_diagram(Signature::empty(), d, Q::one());
        prop_assert_eq!(sl2_reduce_with(&v, Order::Least).unwrap(), sl2_reduce_with(&v, Order::Greatest).unwrap());
    }
}

#[test]
fn chi_is_bijective_per_stratum() {
    let e = engine();
    for (b, a) in [("*x", "up:x"), ("*x,*y", "up:x,*y"), ("*x,@y", "up:x,@y")] {
        let bsig: Signature = b.parse().unwrap();
        let asig: Signature = a.parse().unwrap();
        for n in 0..=4 {
            if bsig.len() > 1 && n > 3 {
                continue;
            }
            let qb = quotient_basis(e, &bsig, n, Filter::All).unwrap();
            let qa = quotient_basis(e, &asig, n, Filter::All).unwrap();
            let m: Vec<Vec<Q>> = (0..qb.dim())
                .map(|k| {
                    qa.dense(
                        &qa.normal_form(&chi(&qb.basis_element(k), "x").unwrap())
                            .unwrap(),
                    )
                })
                .collect();
            assert_eq!(qb.dim(), qa.dim(), "[{b}] degree {n}");
            assert_eq!(dense_rank(&m), qa.dim(), "[{b}] degree {n}");
        }
    }
}

#[test]
fn link_relations_hold_on_the_circle() {
    let e = engine();
    let sig: Signature = "@y,*x".parse().unwrap();
    for n in 1..=3 {
        for r in link_relations(&sig, 0, n, Filter::All, None).unwrap() {
            let open = r.combination.reinterpret("*y,*x".parse().unwrap()).unwrap();
            let closed = crate::spaces::close_interval(&chi(&open, "y").unwrap(), "y").unwrap();
            assert!(is_zero_mod(e, &closed).unwrap());
        }
    }
}
