use super::*;
use crate::calculus::disjoint_union;
use crate::diagrams::Signature;
use crate::rational::q;
use crate::spaces::{enumerate, local_relations_from, Filter, StuSign};

fn vacuum(max: usize) -> Vec<LinComb> {
    let sig = Signature::empty();
    (1..=max)
        .flat_map(|n| enumerate(&sig, n, Filter::All, None).unwrap())
        .map(|d| LinComb::from_diagram(Signature::empty(), d, Q::one()))
        .collect()
}

#[test]
fn small_values() {
    assert_eq!(theta_value().unwrap(), qi(6));
    let w2 = sl2_reduce(&wheel(2, "x").unwrap()).unwrap();
    assert_eq!(w2.matchings, strut("x", "x").unwrap().scale(&qi(2)));
    let loop_only = glue_all(
        &strut("x", "x").unwrap(),
        &strut("x", "x").unwrap(),
        &["x"],
        true,
    )
    .unwrap();
    assert_eq!(sl2_reduce(&loop_only).unwrap().scalar().unwrap(), qi(6));
}

#[test]
fn skeleton_is_refused() {
    let c = crate::wheels::chord("x").unwrap();
    assert!(matches!(sl2_reduce(&c), Err(Error::Domain(_))));
}

#[test]
fn strategies_agree_on_vacuum_diagrams() {
    for v in vacuum(4) {
        let a = sl2_reduce_with(&v, Strategy::Least).unwrap();
        let b = sl2_reduce_with(&v, Strategy::Greatest).unwrap();
        assert_eq!(a, b, "{v}");
    }
}

#[test]
fn strategies_agree_with_legs() {
    let sig = Signature::new(vec![
        crate::diagrams::Component::new(crate::diagrams::ComponentKind::Asterisk, "x"),
        crate::diagrams::Component::new(crate::diagrams::ComponentKind::Asterisk, "y"),
    ])
    .unwrap();
    for n in 1..=3 {
        for d in enumerate(&sig, n, Filter::All, None).unwrap() {
            let v = LinComb::from_diagram(sig.clone(), d, Q::one());
            let a = sl2_reduce_with(&v, Strategy::Least);
            let b = sl2_reduce_with(&v, Strategy::Greatest);
            match (a, b) {
                (Ok(a), Ok(b)) => assert_eq!(a, b, "{v}"),
                (Err(_), Err(_)) => {}
                _ => panic!("strategies disagree on failure for {v}"),
            }
        }
    }
}

#[test]
fn relations_vanish() {
    let stu = StuSign::default();
    for sig in [Signature::empty(), Signature::asterisk("x")] {
        for n in 1..=4 {
            for d in enumerate(&sig, n, Filter::All, None).unwrap() {
                if d.leg_count() % 2 == 1 {
                    continue;
                }
                for r in local_relations_from(&d, &sig, stu).unwrap() {
                    let v = sl2_reduce(&r.combination).unwrap();
                    assert!(v.is_zero(), "{:?} from {}", r.kind, r.combination);
                }
            }
        }
    }
}

#[test]
fn linear_and_multiplicative() {
    let vs = vacuum(3);
    for a in &vs {
        let va = sl2_reduce(a).unwrap().scalar().unwrap();
        for b in &vs {
            let vb = sl2_reduce(b).unwrap().scalar().unwrap();
            let u = disjoint_union(a, b).unwrap();
            assert_eq!(sl2_reduce(&u).unwrap().scalar().unwrap(), &va * &vb);
            let s = a.scale(&q(2, 3)).plus(b).unwrap();
            assert_eq!(
                sl2_reduce(&s).unwrap().scalar().unwrap(),
                q(2, 3) * &va + &vb
            );
        }
    }
}

#[test]
fn wheels_gluing_and_sawon() {
    assert!(verify_sl2_wheel(4).unwrap().holds);
    let g = verify_sl2_gluing(4).unwrap();
    assert!(g.holds);
    assert_eq!(strut_pairing(2).unwrap(), qi(120));
    let t = BernoulliTable::compute(8);
    let s = verify_sawon(3, &t).unwrap();
    assert!(s.holds, "{:?}", s.violations);
}

#[test]
fn solved_coefficients_are_the_table() {
    let c = solve_coefficients(8).unwrap();
    for (i, a) in &c.a {
        assert_eq!(*a, crate::wheels::modified_bernoulli(*i));
    }
    assert_eq!(c.f[&1], q(1, 24));
    let t = BernoulliTable::compute(8);
    assert!(verify_coefficients(8, &t).unwrap().holds);
    let bad = t.perturbed(4, &q(1, 1000));
    assert!(!verify_coefficients(8, &bad).unwrap().holds);
}
