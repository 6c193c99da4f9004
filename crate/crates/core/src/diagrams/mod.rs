//! Jacobi diagrams: representation, canonical form, constructors and text format.

mod canon;
mod graph;
mod signature;
mod text;

pub use canon::{canonicalize, Canonical};
pub use graph::{Attach, Diagram, Graph, Owner, Vertex, NO_DART};
pub use signature::{Component, ComponentKind, Signature, MAX_COMPONENTS};
pub use text::{read_graph, write_graph};

use crate::error::{Error, Result};

pub fn free(comp: usize) -> Attach {
    Attach::Free { comp: comp as u8 }
}

pub fn at(comp: usize, pos: usize) -> Attach {
    Attach::Skeleton {
        comp: comp as u8,
        pos: pos as u16,
    }
}

/// Cycle of `n` trivalent vertices, each carrying one leg. Vertex `i` is oriented
/// (leg, edge to `i+1`, edge to `i-1`). `n = 1` gives the tadpole.
pub fn wheel_graph(n: usize, legs: &[Attach]) -> Result<Graph> {
    if n == 0 || legs.len() != n {
        return Err(Error::Domain(format!(
            "a wheel with {n} spokes needs {n} legs"
        )));
    }
    let mut g = Graph::new();
    let mut next = Vec::with_capacity(n);
    let mut prev = Vec::with_capacity(n);
    let mut stubs = Vec::with_capacity(n);
    for &a in legs {
        stubs.push(g.leg_stub(a));
        next.push(g.dart());
        prev.push(g.dart());
    }
    for i in 0..n {
        g.link(next[i], prev[(i + 1) % n]);
        g.add_tri([stubs[i], next[i], prev[i]]);
    }
    Ok(g)
}

/// The wheel with `n` legs all on one free component.
pub fn wheel_on(n: usize, comp: usize) -> Result<Graph> {
    wheel_graph(n, &vec![free(comp); n])
}

pub fn strut_graph(a: Attach, b: Attach) -> Graph {
    let mut g = Graph::new();
    let (x, y) = g.edge();
    g.add_leg(x, a);
    g.add_leg(y, b);
    g
}

/// Two trivalent vertices joined by three edges, drawn in the plane.
pub fn theta_graph() -> Graph {
    let mut g = Graph::new();
    let (a0, a1) = g.edge();
    let (b0, b1) = g.edge();
    let (c0, c1) = g.edge();
    g.add_tri([a0, b0, c0]);
    g.add_tri([a1, c1, b1]);
    g
}

/// Tree with one trivalent vertex and three legs.
pub fn tripod_graph(legs: [Attach; 3]) -> Graph {
    let mut g = Graph::new();
    let d = legs.map(|a| g.leg_stub(a));
    g.add_tri(d);
    g
}

/// Isolated chords on an interval or circle, given as pairs of positions.
pub fn chords_graph(comp: usize, pairs: &[(usize, usize)]) -> Graph {
    let mut g = Graph::new();
    for &(p, q) in pairs {
        let (x, y) = g.edge();
        g.add_leg(x, at(comp, p));
        g.add_leg(y, at(comp, q));
    }
    g
}

/// Disjoint union of graphs on one signature, skeleton positions concatenated.
pub fn union_graphs(sig: &Signature, parts: &[Graph]) -> Graph {
    let ident: Vec<usize> = (0..sig.len()).collect();
    let mut out = Graph::new();
    let mut shift = vec![0u16; sig.len()];
    for p in parts {
        out.append(p, &ident, &shift);
        for &(_, a) in &p.legs {
            if let Attach::Skeleton { comp, .. } = a {
                shift[comp as usize] += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canon(g: &Graph, sig: &Signature) -> Canonical {
        canonicalize(g, sig).unwrap()
    }

    #[test]
    fn tadpole_and_odd_wheels_vanish() {
        let sig = Signature::asterisk("x");
        assert!(canon(&wheel_on(1, 0).unwrap(), &sig).is_none());
        assert!(canon(&wheel_on(3, 0).unwrap(), &sig).is_none());
        assert!(canon(&wheel_on(5, 0).unwrap(), &sig).is_none());
        assert!(canon(&wheel_on(2, 0).unwrap(), &sig).is_some());
    }

    #[test]
    fn vertex_flip_negates() {
        let sig = Signature::asterisk("x");
        let g = wheel_on(4, 0).unwrap();
        let (d, s) = canon(&g, &sig).unwrap();
        let mut h = g.clone();
        h.flip(2);
        let (d2, s2) = canon(&h, &sig).unwrap();
        assert_eq!(d, d2);
        assert_eq!(s, -s2);
        h.flip(0);
        assert_eq!(canon(&h, &sig).unwrap().1, s);
    }

    #[test]
    fn wheel_reflection_is_even() {
        // flipping every vertex of an even wheel is its mirror image, an automorphism class
        let sig = Signature::asterisk("x");
        for n in [2, 4, 6] {
            let g = wheel_on(n, 0).unwrap();
            let mut h = g.clone();
            for v in 0..n {
                h.flip(v);
            }
            assert_eq!(canon(&g, &sig).unwrap(), canon(&h, &sig).unwrap());
        }
    }

    #[test]
    fn two_legs_on_a_vertex_with_one_label_vanish() {
        let sig: Signature = "*x,*y".parse().unwrap();
        assert!(canon(&tripod_graph([free(0), free(0), free(1)]), &sig).is_none());
        assert!(canon(&tripod_graph([free(0), free(1), free(1)]), &sig).is_none());
        let isig: Signature = "up:z".parse().unwrap();
        assert!(canon(&tripod_graph([at(0, 0), at(0, 1), at(0, 2)]), &isig).is_some());
    }

    #[test]
    fn relabelling_darts_is_invisible() {
        let sig = Signature::asterisk("x");
        let g = wheel_on(6, 0).unwrap();
        let base = canon(&g, &sig).unwrap();
        // rotate the wheel by renaming legs: build with a cyclic shift of darts
        let mut h = Graph::new();
        let perm: Vec<u32> = (0..g.mate.len() as u32).rev().collect();
        h.mate = vec![NO_DART; g.mate.len()];
        for (d, &m) in g.mate.iter().enumerate() {
            h.mate[perm[d] as usize] = perm[m as usize];
        }
        h.tri = g
            .tri
            .iter()
            .rev()
            .map(|t| t.map(|d| perm[d as usize]))
            .collect();
        h.legs = g
            .legs
            .iter()
            .rev()
            .map(|&(d, a)| (perm[d as usize], a))
            .collect();
        assert_eq!(canon(&h, &sig).unwrap(), base);
    }

    #[test]
    fn circle_rotation_is_invisible() {
        let sig = Signature::circle("c");
        let a = chords_graph(0, &[(0, 2), (1, 3)]);
        let b = chords_graph(0, &[(1, 3), (2, 0)]);
        assert_eq!(canon(&a, &sig), canon(&b, &sig));
        let c = chords_graph(0, &[(0, 1), (2, 3)]);
        let d = chords_graph(0, &[(1, 2), (3, 0)]);
        assert_eq!(canon(&c, &sig), canon(&d, &sig));
        assert_ne!(canon(&a, &sig), canon(&c, &sig));
        let isig = Signature::interval("c");
        assert_ne!(canon(&c, &isig), canon(&d, &isig));
    }

    #[test]
    fn malformed_graphs_are_rejected() {
        let sig = Signature::asterisk("x");
        let mut g = strut_graph(free(0), free(0));
        g.mate[0] = NO_DART;
        assert!(canonicalize(&g, &sig).is_err());
        let bad = strut_graph(free(0), free(3));
        assert!(canonicalize(&bad, &sig).is_err());
        let isig = Signature::interval("x");
        let gap = chords_graph(0, &[(0, 2)]);
        assert!(canonicalize(&gap, &isig).is_err());
    }

    #[test]
    fn components_are_blocks() {
        let sig = Signature::asterisk("x");
        let g = union_graphs(
            &sig,
            &[
                wheel_on(2, 0).unwrap(),
                strut_graph(free(0), free(0)),
                theta_graph(),
            ],
        );
        let (d, _) = canon(&g, &sig).unwrap();
        let parts = d.components();
        assert_eq!(parts.len(), 3);
        for p in &parts {
            let (c, s) = canon(&p.to_graph(), &sig).unwrap();
            assert_eq!(&c, p);
            assert_eq!(s, 1);
        }
        assert!(d.has_vacuum_component());
        assert!(d.has_strut_between(&[0]));
    }

    #[test]
    fn text_round_trip() {
        let sig: Signature = "up:z,*x".parse().unwrap();
        let g = union_graphs(
            &sig,
            &[
                tripod_graph([at(0, 0), free(1), at(0, 1)]),
                wheel_on(2, 1).unwrap(),
            ],
        );
        let s = write_graph(&g, &sig, -1);
        let (sig2, g2, sign) = read_graph(&s).unwrap();
        assert_eq!(sig2, sig);
        assert_eq!(sign, -1);
        assert_eq!(
            canonicalize(&g2, &sig).unwrap(),
            canonicalize(&g, &sig).unwrap()
        );
    }
}
