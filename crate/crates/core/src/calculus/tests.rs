use super::*;
use crate::diagrams::{chords_graph, free, strut_graph, theta_graph, wheel_on};
use crate::rational::{q, qi};
use crate::spaces::{equal_mod, EngineConfig};

fn star() -> Signature {
    Signature::asterisk("x")
}

fn up() -> Signature {
    Signature::interval("x")
}

fn lc(sig: &Signature, g: &Graph) -> LinComb {
    LinComb::from_graph(sig.clone(), g).unwrap()
}

fn wheel(n: usize) -> LinComb {
    lc(&star(), &wheel_on(n, 0).unwrap())
}

fn strut() -> LinComb {
    lc(&star(), &strut_graph(free(0), free(0)))
}

fn chord() -> LinComb {
    lc(&up(), &chords_graph(0, &[(0, 1)]))
}

fn engine() -> Engine {
    Engine::new(EngineConfig::default())
}

#[test]
fn coproduct_of_strut() {
    let d = coproduct_delta(&strut(), "x", &["a", "b"]).unwrap();
    let sig: Signature = "*a,*b".parse().unwrap();
    let mut want = LinComb::zero(sig.clone());
    want.add_graph(&strut_graph(free(0), free(0)), qi(1))
        .unwrap();
    want.add_graph(&strut_graph(free(0), free(1)), qi(2))
        .unwrap();
    want.add_graph(&strut_graph(free(1), free(1)), qi(1))
        .unwrap();
    assert_eq!(d, want);
}

#[test]
fn pairing_of_two_wheels() {
    let w = wheel(2);
    let p = inner_product(&w, &w, &["x"]).unwrap();
    let mut g = Graph::new();
    g.append(&wheel_on(2, 0).unwrap(), &[0], &[0]);
    g.append(&wheel_on(2, 0).unwrap(), &[0], &[0]);
    let one = lc(&Signature::empty(), &g.glue_legs(&[(0, 2), (1, 3)]));
    assert_eq!(p, one.scale(&qi(2)));
    assert_eq!(p.len(), 1);
}

#[test]
fn operator_with_more_legs_vanishes() {
    assert!(apply_diff_op(&wheel(4), &wheel(2), "x").unwrap().is_zero());
}

#[test]
fn wheel_two_acting_on_wheel_four() {
    let got = apply_diff_op(&wheel(2), &wheel(4), "x").unwrap();
    let mut g = Graph::new();
    g.append(&wheel_on(4, 0).unwrap(), &[0], &[0]);
    g.append(&wheel_on(2, 0).unwrap(), &[0], &[0]);
    let side = lc(&star(), &g.glue_legs(&[(4, 0), (5, 1)]));
    let diag = lc(&star(), &g.glue_legs(&[(4, 0), (5, 2)]));
    assert_ne!(side, diag);
    let want = side.scale(&qi(8)).plus(&diag.scale(&qi(4))).unwrap();
    assert_eq!(got, want);
}

#[test]
fn operator_degree_bookkeeping() {
    let c = wheel(2);
    let d = power_union(&strut(), 3, None).unwrap();
    let out = apply_diff_op(&c, &d, "x").unwrap();
    for (t, _) in out.terms() {
        assert_eq!(t.degree(), 2 + 3 - 2);
        assert_eq!(t.leg_count(), 4);
    }
}

#[test]
fn symmetrization_of_a_strut_is_a_chord() {
    assert_eq!(chi(&strut(), "x").unwrap(), chord());
    let e = engine();
    assert_eq!(chi_inverse(&e, &chord(), "x").unwrap(), strut());
}

#[test]
fn inverse_symmetrization_of_two_chords() {
    let e = engine();
    let cc = connected_sum(&chord(), &chord(), "x").unwrap();
    let b = chi_inverse(&e, &cc, "x").unwrap();
    let want = power_union(&strut(), 2, None)
        .unwrap()
        .plus(&wheel(2).scale(&q(1, 6)))
        .unwrap();
    assert!(equal_mod(&e, &b, &want).unwrap());
    assert!(equal_mod(&e, &chi(&b, "x").unwrap(), &cc).unwrap());
}

#[test]
fn connected_sum_is_associative() {
    let e = engine();
    let a = chord();
    let b = chi(&wheel(2), "x").unwrap();
    let c = lc(&up(), &chords_graph(0, &[(0, 2), (1, 3)]));
    let l = connected_sum(&connected_sum(&a, &b, "x").unwrap(), &c, "x").unwrap();
    let r = connected_sum(&a, &connected_sum(&b, &c, "x").unwrap(), "x").unwrap();
    assert_eq!(l, r);
    let ba = connected_sum(&b, &a, "x").unwrap();
    assert!(equal_mod(&e, &connected_sum(&a, &b, "x").unwrap(), &ba).unwrap());
}

#[test]
fn exponential_of_strut_is_grouplike() {
    let s = strut();
    let e = exp_union(&s, 4).unwrap();
    let lhs = box_coproduct(&e).unwrap().truncate(4);
    let rhs = tensor(&e, &e).unwrap().truncate(4);
    assert_eq!(lhs, rhs);
    let logged = log_union(&e, 4).unwrap();
    assert_eq!(logged, s);
}

#[test]
fn projection_is_multiplicative() {
    let mut a = chord();
    a.add_graph(
        &union_one(&up(), &theta_graph(), &chords_graph(0, &[(0, 1)])),
        q(1, 3),
    )
    .unwrap();
    let mut b = chi(&wheel(2), "x").unwrap();
    b.add_graph(&theta_graph(), qi(2)).unwrap();
    let lhs = pi_bc(&connected_sum(&a, &b, "x").unwrap());
    let rhs = connected_sum(&pi_bc(&a), &pi_bc(&b), "x").unwrap();
    assert_eq!(lhs, rhs);
}

fn union_one(sig: &Signature, a: &Graph, b: &Graph) -> Graph {
    crate::diagrams::union_graphs(sig, &[a.clone(), b.clone()])
}

#[test]
fn leg_scaling() {
    let s = strut();
    assert_eq!(psi(&s, "x", &qi(3)).unwrap(), s.scale(&qi(9)));
}

#[test]
fn gluing_two_struts_is_refused() {
    assert!(inner_product(&strut(), &strut(), &["x"]).is_err());
    let looped = glue_all(&strut(), &strut(), &["x"], true).unwrap();
    assert_eq!(looped.len(), 1);
    assert_eq!(looped.terms().next().unwrap().0.loops(), 1);
}

#[test]
fn struts_are_not_operators() {
    assert!(apply_diff_op(&strut(), &wheel(2), "x").is_err());
}
