//! Relation instances: AS, IHX, STU and the link relations of circled asterisks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagrams::{Attach, Component, ComponentKind, Diagram, Graph, Owner, Signature};
use crate::error::{Error, Result};
use crate::rational::Q;

use super::enumerate::{enumerate, Filter, LegCounts};
use super::lincomb::LinComb;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    As,
    Ihx,
    Stu,
    Link,
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub kind: RelationKind,
    pub combination: LinComb,
}

/// Sign convention for STU: `+1` imposes S = T - U, `-1` the opposite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StuSign(pub i8);

impl Default for StuSign {
    fn default() -> Self {
        StuSign(1)
    }
}

fn add(l: &mut LinComb, g: &Graph, c: i64) -> Result<()> {
    l.add_graph(g, Q::from_integer(c.into()))
}

/// AS, IHX and STU instances. Their terms keep the leg counts of `d`.
pub fn local_relations_from(d: &Diagram, sig: &Signature, stu: StuSign) -> Result<Vec<Relation>> {
    let g = d.to_graph();
    let own = g.owners();
    let mut out = Vec::new();

    for v in 0..g.tri.len() {
        let mut l = LinComb::zero(sig.clone());
        add(&mut l, &g, 1)?;
        let mut h = g.clone();
        h.flip(v);
        add(&mut l, &h, 1)?;
        out.push(Relation {
            kind: RelationKind::As,
            combination: l,
        });
    }

    for i in 0..g.tri.len() {
        for r in 0..3 {
            let e = g.tri[i][r];
            let f = g.mate[e as usize];
            let Owner::Tri(k) = own[f as usize] else {
                continue;
            };
            let k = k as usize;
            if k <= i {
                continue;
            }
            let (a, b) = (g.tri[i][(r + 1) % 3], g.tri[i][(r + 2) % 3]);
            let rk = g.tri[k].iter().position(|&x| x == f).unwrap();
            let (c, dd) = (g.tri[k][(rk + 1) % 3], g.tri[k][(rk + 2) % 3]);
            let mut l = LinComb::zero(sig.clone());
            for (u, w) in [
                ([e, a, b], [f, c, dd]),
                ([e, b, c], [f, a, dd]),
                ([e, c, a], [f, b, dd]),
            ] {
                let mut h = g.clone();
                h.tri[i] = u;
                h.tri[k] = w;
                add(&mut l, &h, 1)?;
            }
            out.push(Relation {
                kind: RelationKind::Ihx,
                combination: l,
            });
        }
    }

    for i in 0..g.tri.len() {
        for r in 0..3 {
            let s = g.tri[i][r];
            let Owner::Leg(li) = own[g.mate[s as usize] as usize] else {
                continue;
            };
            let Attach::Skeleton { comp, pos } = g.legs[li as usize].1 else {
                continue;
            };
            let (a, b) = (g.tri[i][(r + 1) % 3], g.tri[i][(r + 2) % 3]);
            let mut l = LinComb::zero(sig.clone());
            add(&mut l, &g, 1)?;
            for (first, second, c) in [(a, b, -stu.0 as i64), (b, a, stu.0 as i64)] {
                let mut h = g.clone();
                h.tri.remove(i);
                h.legs.remove(li as usize);
                for leg in h.legs.iter_mut() {
                    if let Attach::Skeleton { comp: c2, pos: p2 } = &mut leg.1 {
                        if *c2 == comp && *p2 > pos {
                            *p2 += 1;
                        }
                    }
                }
                h.add_leg(first, Attach::Skeleton { comp, pos });
                h.add_leg(second, Attach::Skeleton { comp, pos: pos + 1 });
                add(&mut l, &h, c)?;
            }
            out.push(Relation {
                kind: RelationKind::Stu,
                combination: l,
            });
        }
    }

    Ok(out)
}

/// The signature carrying a marked leg for link relations on `sig`.
pub fn marked_signature(sig: &Signature) -> Result<Signature> {
    sig.push(Component::new(ComponentKind::Asterisk, "mark'"))
}

/// The link relation of a diagram `m` on [`marked_signature`] with exactly one marked
/// leg: the marked leg is attached to each `y` leg in turn.
pub fn link_relation(m: &Diagram, sig: &Signature, y: usize) -> Result<Relation> {
    let mut g = m.to_graph();
    let mark = Attach::Free {
        comp: sig.len() as u8,
    };
    let marked: Vec<usize> = (0..g.legs.len()).filter(|&i| g.legs[i].1 == mark).collect();
    if marked.len() != 1 || sig.kind(y) != ComponentKind::CircledAsterisk {
        return Err(Error::Domain(
            "a link relation needs one marked leg and a circled asterisk".into(),
        ));
    }
    let li = marked[0];
    g.legs[li].1 = Attach::Free { comp: y as u8 };
    let mut l = LinComb::zero(sig.clone());
    for lj in 0..g.legs.len() {
        if lj != li && g.legs[lj].1 == (Attach::Free { comp: y as u8 }) {
            if let Some(h) = link_term(&g, li, lj) {
                add(&mut l, &h, 1)?;
            }
        }
    }
    Ok(Relation {
        kind: RelationKind::Link,
        combination: l,
    })
}

/// Every link relation on `y` whose terms lie in the given stratum.
pub fn link_relations(
    sig: &Signature,
    y: usize,
    degree: usize,
    filter: Filter,
    legs: Option<&LegCounts>,
) -> Result<Vec<Relation>> {
    let msig = marked_signature(sig)?;
    let generators = match legs {
        Some(l) => {
            let mut more = l.clone();
            more.push(1);
            enumerate(&msig, degree, filter, Some(&more))?
        }
        None => enumerate(&msig, degree, filter, None)?
            .into_iter()
            .filter(|d| d.legs_on(sig.len()) == 1)
            .collect(),
    };
    generators
        .par_iter()
        .map(|m| link_relation(m, sig, y))
        .collect()
}

/// Leg `li` is detached and its edge end is glued onto the edge of leg `lj` through a
/// new vertex oriented (new leg, old partner of `li`, old partner of `lj`).
fn link_term(g: &Graph, li: usize, lj: usize) -> Option<Graph> {
    let dl = g.legs[li].0;
    let dj = g.legs[lj].0;
    let pl = g.mate[dl as usize];
    let pj = g.mate[dj as usize];
    if pl == dj {
        return None;
    }
    let mut h = g.clone();
    let n1 = h.dart();
    let n2 = h.dart();
    let n3 = h.dart();
    h.link(n1, dj);
    h.link(n2, pl);
    h.link(n3, pj);
    h.add_tri([n1, n2, n3]);
    h.legs.remove(li);
    Some(h)
}
