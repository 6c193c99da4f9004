use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::*;
use crate::diagrams::{at, canonicalize, chords_graph, free, strut_graph, wheel_on, Graph};
use crate::rational::{q, qi};
use crate::sl2::sl2_reduce;

fn engine() -> Engine {
    Engine::new(EngineConfig::default())
}

fn sig(s: &str) -> Signature {
    s.parse().unwrap()
}

type Pairs = [(u32, u32)];

fn perfect_matchings(open: &mut Vec<u32>, pairs: &mut Vec<(u32, u32)>, f: &mut dyn FnMut(&Pairs)) {
    let Some(first) = open.pop() else {
        f(pairs);
        return;
    };
    for i in 0..open.len() {
        let other = open.remove(i);
        pairs.push((first, other));
        perfect_matchings(open, pairs, f);
        pairs.pop();
        open.insert(i, other);
    }
    open.push(first);
}

/// Every diagram of the given degree, by pairing darts in all possible ways and
/// keeping the nonzero canonical forms.
fn brute_force(s: &Signature, degree: usize) -> BTreeSet<Diagram> {
    let mut out = BTreeSet::new();
    for (t, counts) in enumerate::distributions(s, degree, None) {
        let mut attach = Vec::new();
        for (c, &k) in counts.iter().enumerate() {
            for p in 0..k {
                attach.push(if s.kind(c).is_skeleton() {
                    at(c, p)
                } else {
                    free(c)
                });
            }
        }
        let n = 3 * t + attach.len();
        let mut open: Vec<u32> = (0..n as u32).collect();
        perfect_matchings(&mut open, &mut Vec::new(), &mut |pairs| {
            let mut g = Graph::new();
            for _ in 0..n {
                g.dart();
            }
            for i in 0..t as u32 {
                g.add_tri([3 * i, 3 * i + 1, 3 * i + 2]);
            }
            for (i, &a) in attach.iter().enumerate() {
                g.add_leg((3 * t + i) as u32, a);
            }
            for &(a, b) in pairs {
                g.link(a, b);
            }
            if let Some((d, _)) = canonicalize(&g, s).unwrap() {
                out.insert(d);
            }
        });
    }
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for s in ["empty", "*x", "up:x", "circle:x", "*x,*y", "@y", "up:x,*y"] {
        let s = sig(s);
        for n in 0..=2 {
            let got: BTreeSet<Diagram> = enumerate(&s, n, Filter::All, None)
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(got, brute_force(&s, n), "[{s}] degree {n}");
        }
    }
}

#[test]
fn small_enumerations() {
    assert_eq!(
        enumerate(&Signature::empty(), 0, Filter::All, None).unwrap(),
        vec![Diagram::empty()]
    );
    let star = sig("*x");
    let one = enumerate(&star, 1, Filter::All, None).unwrap();
    let strut = LinComb::from_graph(star.clone(), &strut_graph(free(0), free(0))).unwrap();
    assert!(one.contains(strut.terms().next().unwrap().0));
    assert!(one.iter().all(|d| d.tri_count() != 1));
    assert!(LinComb::from_graph(star, &wheel_on(1, 0).unwrap())
        .unwrap()
        .is_zero());
}

#[test]
fn filters_select_subsets() {
    let s = sig("*x");
    for n in 0..=3 {
        let all = enumerate(&s, n, Filter::All, None).unwrap();
        let bc = enumerate(&s, n, Filter::BoundaryConnected, None).unwrap();
        let conn = enumerate(&s, n, Filter::Connected, None).unwrap();
        let want_bc: Vec<_> = all
            .iter()
            .filter(|d| !d.has_vacuum_component())
            .cloned()
            .collect();
        let want_conn: Vec<_> = all
            .iter()
            .filter(|d| d.blocks().len() == 1)
            .cloned()
            .collect();
        assert_eq!(bc, want_bc);
        assert_eq!(conn, want_conn);
    }
}

#[test]
fn stu_instance_on_the_interval() {
    let up = sig("up:x");
    let crossed = LinComb::from_graph(up.clone(), &chords_graph(0, &[(0, 2), (1, 3)])).unwrap();
    let crossed = crossed.terms().next().unwrap().0.clone();
    let rels = relation_instances(&up, 2, Filter::BoundaryConnected, StuSign::default()).unwrap();
    let found = rels.iter().find(|r| {
        r.kind == RelationKind::Stu
            && r.combination.len() == 3
            && !r.combination.coefficient(&crossed).is_zero()
            && r.combination.terms().any(|(d, _)| d.tri_count() == 1)
    });
    let r = found.expect("an STU instance joins the crossed chords to the tripod");
    assert!(r
        .combination
        .terms()
        .all(|(_, c)| *c == Q::one() || *c == -Q::one()));
    let e = engine();
    assert!(is_zero_mod(&e, &r.combination).unwrap());
}

#[test]
fn relation_instances_reduce_to_zero() {
    let e = engine();
    for s in ["*x", "up:x", "circle:x", "@x", "up:x,*y"] {
        let s = sig(s);
        for n in 0..=3 {
            let qb = quotient_basis(&e, &s, n, Filter::All).unwrap();
            for r in relation_instances(&s, n, Filter::All, StuSign::default()).unwrap() {
                assert!(
                    qb.normal_form(&r.combination).unwrap().is_empty(),
                    "{:?} in [{s}]",
                    r.kind
                );
            }
        }
    }
}

#[test]
fn rank_plus_dimension_is_the_span() {
    let e = engine();
    for s in ["*x", "up:x", "circle:x", "@x", "*x,*y"] {
        let s = sig(s);
        for n in 0..=4 {
            let qb = quotient_basis(&e, &s, n, Filter::All).unwrap();
            assert_eq!(qb.rank() + qb.dim(), qb.spanning().len());
            assert_eq!(
                qb.spanning().len(),
                enumerate(&s, n, Filter::All, None).unwrap().len()
            );
        }
    }
}

#[test]
fn dimension_ignores_column_order() {
    for s in ["up:x", "@x", "*x,*y"] {
        let s = sig(s);
        for n in 1..=3 {
            let span = enumerate(&s, n, Filter::All, None).unwrap();
            let len = span.len();
            let pos = |d: &Diagram| len - 1 - span.iter().position(|x| x == d).unwrap();
            let mut ech = Echelon::new(len);
            for r in relation_instances(&s, n, Filter::All, StuSign::default()).unwrap() {
                ech.insert(r.combination.terms().map(|(d, c)| (pos(d), c.clone())));
            }
            let qb = quotient_basis(&engine(), &s, n, Filter::All).unwrap();
            assert_eq!(ech.rank(), qb.rank(), "[{s}] degree {n}");
        }
    }
}

#[test]
fn known_dimensions() {
    let e = engine();
    assert_eq!(
        quotient_basis(&e, &sig("up:x"), 1, Filter::BoundaryConnected)
            .unwrap()
            .dim(),
        1
    );
    assert_eq!(
        quotient_basis(&e, &sig("*x"), 0, Filter::All)
            .unwrap()
            .dim(),
        1
    );
    for n in 0..=4 {
        for f in [Filter::All, Filter::BoundaryConnected] {
            let a = quotient_basis(&e, &sig("up:x"), n, f).unwrap().dim();
            let b = quotient_basis(&e, &sig("*x"), n, f).unwrap().dim();
            let c = quotient_basis(&e, &sig("circle:x"), n, f).unwrap().dim();
            let l = quotient_basis(&e, &sig("@x"), n, f).unwrap().dim();
            assert_eq!(a, b, "degree {n} {f:?}");
            assert_eq!(c, l, "degree {n} {f:?}");
        }
    }
}

fn ihx_legs(order: [usize; 4], u_first: bool) -> LinComb {
    let s = sig("*a,*b,*c,*d");
    let mut g = Graph::new();
    let (e, f) = g.edge();
    let stubs: Vec<u32> = (0..4).map(|i| g.leg_stub(free(order[i]))).collect();
    if u_first {
        g.add_tri([e, stubs[0], stubs[1]]);
    } else {
        g.add_tri([e, stubs[1], stubs[0]]);
    }
    g.add_tri([f, stubs[2], stubs[3]]);
    LinComb::from_graph(s, &g).unwrap()
}

#[test]
fn ihx_coefficients_agree_with_sl2() {
    let e = engine();
    let i = ihx_legs([0, 1, 2, 3], true);
    let h = ihx_legs([0, 3, 1, 2], true);
    let x = ihx_legs([0, 2, 3, 1], true);
    let qb = quotient_basis(&e, i.signature(), 3, Filter::All).unwrap();
    let nf = |v: &LinComb| qb.normal_form(v).unwrap();
    let signs = [Q::one(), -Q::one()];
    let mut found = Vec::new();
    for a in &signs {
        for b in &signs {
            if nf(&i) == nf(&h.scale(a).plus(&x.scale(b)).unwrap()) {
                found.push([a.clone(), b.clone()]);
            }
        }
    }
    assert_eq!(found.len(), 1, "I is a signed sum of H and X");
    let sol = &found[0];
    assert!(!nf(&h).is_empty() && !nf(&x).is_empty() && nf(&h) != nf(&x));
    let lhs = sl2_reduce(&i).unwrap().matchings;
    let rhs = sl2_reduce(&h.scale(&sol[0]).plus(&x.scale(&sol[1])).unwrap())
        .unwrap()
        .matchings;
    assert_eq!(lhs, rhs);
    // flipping a vertex negates
    assert_eq!(ihx_legs([0, 1, 2, 3], false), i.scale(&qi(-1)));
}

#[test]
fn normal_form_is_linear() {
    let e = engine();
    let s = sig("up:x");
    let qb = quotient_basis(&e, &s, 3, Filter::All).unwrap();
    for (k, d) in qb.spanning().iter().enumerate().take(20) {
        let v = LinComb::from_diagram(s.clone(), d.clone(), Q::one());
        let w = LinComb::from_diagram(
            s.clone(),
            qb.spanning()[(k + 1) % qb.spanning().len()].clone(),
            q(2, 3),
        );
        let sum = qb.normal_form(&v.plus(&w).unwrap()).unwrap();
        let mut want = qb.normal_form(&v).unwrap();
        for (i, c) in qb.normal_form(&w).unwrap() {
            *want.entry(i).or_insert_with(Q::zero) += c;
        }
        want.retain(|_, c| !c.is_zero());
        assert_eq!(sum, want);
        assert_eq!(
            qb.normal_form(&v.plus(&v).unwrap()).unwrap(),
            qb.normal_form(&v.scale(&qi(2))).unwrap()
        );
    }
}

#[test]
fn closing_the_interval() {
    let up = sig("up:x");
    let empty = LinComb::one(up.clone());
    assert_eq!(
        close_interval(&empty, "x").unwrap(),
        LinComb::one(sig("circle:x"))
    );
    let chord = LinComb::from_graph(up.clone(), &chords_graph(0, &[(0, 1)])).unwrap();
    let closed = LinComb::from_graph(sig("circle:x"), &chords_graph(0, &[(0, 1)])).unwrap();
    assert_eq!(close_interval(&chord, "x").unwrap(), closed);
    assert!(close_interval(&LinComb::one(sig("*x")), "x").is_err());
    let e = engine();
    for s in ["up:x", "up:x,@y", "up:x,circle:y"] {
        let s = sig(s);
        for n in 0..=3 {
            let a = quotient_basis(&e, &s, n, Filter::All).unwrap();
            let c = quotient_basis(
                &e,
                &s.with_kind("x", crate::diagrams::ComponentKind::Circle)
                    .unwrap(),
                n,
                Filter::All,
            )
            .unwrap();
            let m: Vec<Vec<Q>> = (0..a.dim())
                .map(|k| {
                    c.dense(
                        &c.normal_form(&close_interval(&a.basis_element(k), "x").unwrap())
                            .unwrap(),
                    )
                })
                .collect();
            assert_eq!(a.dim(), c.dim(), "[{s}] degree {n}");
            assert_eq!(dense_rank(&m), c.dim(), "[{s}] degree {n}");
        }
    }
}

#[test]
fn closing_fails_next_to_an_open_component() {
    let e = engine();
    for s in ["up:x,up:y", "up:x,*y"] {
        let s = sig(s);
        let closed = s
            .with_kind("x", crate::diagrams::ComponentKind::Circle)
            .unwrap();
        let mut differs = false;
        for n in 0..=3 {
            let a = quotient_basis(&e, &s, n, Filter::All).unwrap();
            let c = quotient_basis(&e, &closed, n, Filter::All).unwrap();
            differs |= a.dim() != c.dim();
        }
        assert!(differs, "[{s}]");
    }
}

#[test]
fn link_relation_count() {
    let s = sig("@y");
    let msig = marked_signature(&s).unwrap();
    for n in 1..=2 {
        let marked = brute_force(&msig, n)
            .into_iter()
            .filter(|d| d.legs_on(1) == 1)
            .count();
        assert_eq!(
            link_relations(&s, 0, n, Filter::All, None).unwrap().len(),
            marked
        );
    }
}

#[test]
fn link_relations_are_compatible() {
    // in the circle space every link relation is already a consequence of STU
    let e = engine();
    let s = sig("@y");
    for n in 1..=3 {
        for r in link_relations(&s, 0, n, Filter::All, None).unwrap() {
            let on_circle = r.combination.reinterpret(sig("*y")).unwrap();
            assert!(crate::calculus::chi(&on_circle, "y").is_ok());
            let closed =
                close_interval(&crate::calculus::chi(&on_circle, "y").unwrap(), "y").unwrap();
            assert!(is_zero_mod(&e, &closed).unwrap());
        }
    }
}

#[test]
fn normal_form_rejects_outside_diagrams() {
    let e = engine();
    let qb = quotient_basis(&e, &sig("*x"), 2, Filter::All).unwrap();
    let strut = LinComb::from_graph(sig("*x"), &strut_graph(free(0), free(0))).unwrap();
    assert!(qb.normal_form(&strut).is_err());
}

#[test]
fn strata_survive_the_disk_cache() {
    let dir = tempfile::tempdir().unwrap();
    let config = || EngineConfig {
        cache_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    let s = sig("up:x,@y");
    let first = quotient_basis(&Engine::new(config()), &s, 3, Filter::All).unwrap();
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = quotient_basis(&Engine::new(config()), &s, 3, Filter::All).unwrap();
    assert_eq!(first.spanning(), second.spanning());
    assert_eq!(first.basis(), second.basis());
    for d in first.spanning() {
        assert_eq!(
            first.normal_form_of(d).unwrap(),
            second.normal_form_of(d).unwrap()
        );
    }
    // a damaged file is rebuilt rather than trusted
    let path = files[0].as_ref().unwrap().path();
    std::fs::write(&path, b"{").unwrap();
    let third = quotient_basis(&Engine::new(config()), &s, 3, Filter::All).unwrap();
    assert_eq!(third.dim(), first.dim());
    // another STU convention never reads this file
    let swapped = Engine::new(EngineConfig {
        stu: StuSign(-1),
        ..config()
    });
    quotient_basis(&swapped, &s, 3, Filter::All).unwrap();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn degree_cap_is_enforced() {
    let e = Engine::new(EngineConfig {
        max_degree: 2,
        ..Default::default()
    });
    assert!(matches!(
        quotient_basis(&e, &sig("*x"), 3, Filter::All),
        Err(crate::error::Error::Capacity { .. })
    ));
}
