//! Raw diagram graphs and their canonical form.
//!
//! A [`Graph`] is the working representation: darts (edge ends) paired by `mate`,
//! trivalent vertices holding a cyclically ordered dart triple, and univalent legs.
//! A [`Diagram`] is the canonical representative of an isomorphism class: vertices in
//! canonical order, edges as sorted vertex pairs, and the implicit orientation in which
//! each trivalent vertex lists its darts by increasing edge index.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NO_DART: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Attach {
    /// Leg on an interval or circle at a position in the leg order.
    Skeleton { comp: u8, pos: u16 },
    /// Leg labelled by an asterisk or circled-asterisk component.
    Free { comp: u8 },
}

impl Attach {
    pub fn comp(self) -> usize {
        match self {
            Attach::Skeleton { comp, .. } | Attach::Free { comp } => comp as usize,
        }
    }

    pub fn with_comp(self, comp: usize) -> Attach {
        match self {
            Attach::Skeleton { pos, .. } => Attach::Skeleton {
                comp: comp as u8,
                pos,
            },
            Attach::Free { .. } => Attach::Free { comp: comp as u8 },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    Leg(Attach),
    Tri,
}

impl Vertex {
    pub(crate) fn color(self) -> u32 {
        match self {
            Vertex::Leg(Attach::Skeleton { comp, pos }) => ((comp as u32) << 16) | pos as u32,
            Vertex::Leg(Attach::Free { comp }) => (1 << 30) | ((comp as u32) << 16),
            Vertex::Tri => 2 << 30,
        }
    }

    pub(crate) fn from_color(c: u32) -> Vertex {
        match c >> 30 {
            0 => Vertex::Leg(Attach::Skeleton {
                comp: ((c >> 16) & 0x3fff) as u8,
                pos: (c & 0xffff) as u16,
            }),
            1 => Vertex::Leg(Attach::Free {
                comp: ((c >> 16) & 0x3fff) as u8,
            }),
            _ => Vertex::Tri,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Owner {
    None,
    Leg(u32),
    Tri(u32),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    pub tri: Vec<[u32; 3]>,
    pub legs: Vec<(u32, Attach)>,
    pub mate: Vec<u32>,
    /// Closed edge loops with no vertices (only produced by gluing).
    pub loops: u32,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn dart(&mut self) -> u32 {
        self.mate.push(NO_DART);
        (self.mate.len() - 1) as u32
    }

    pub fn edge(&mut self) -> (u32, u32) {
        let a = self.dart();
        let b = self.dart();
        self.link(a, b);
        (a, b)
    }

    pub fn link(&mut self, a: u32, b: u32) {
        self.mate[a as usize] = b;
        self.mate[b as usize] = a;
    }

    pub fn add_tri(&mut self, darts: [u32; 3]) -> usize {
        self.tri.push(darts);
        self.tri.len() - 1
    }

    pub fn add_leg(&mut self, dart: u32, attach: Attach) -> usize {
        self.legs.push((dart, attach));
        self.legs.len() - 1
    }

    /// Leg hanging off a fresh edge; returns the free dart at the other end.
    pub fn leg_stub(&mut self, attach: Attach) -> u32 {
        let (a, b) = self.edge();
        self.add_leg(a, attach);
        b
    }

    pub fn vertex_count(&self) -> usize {
        self.tri.len() + self.legs.len()
    }

    pub fn degree(&self) -> Result<usize> {
        let n = self.vertex_count();
        if !n.is_multiple_of(2) {
            return Err(Error::Structural(format!("odd vertex count {n}")));
        }
        Ok(n / 2)
    }

    pub fn owners(&self) -> Vec<Owner> {
        let mut own = vec![Owner::None; self.mate.len()];
        for (i, &(d, _)) in self.legs.iter().enumerate() {
            own[d as usize] = Owner::Leg(i as u32);
        }
        for (i, t) in self.tri.iter().enumerate() {
            for &d in t {
                own[d as usize] = Owner::Tri(i as u32);
            }
        }
        own
    }

    /// Appends a copy of `other` with its component indices sent through `comp_map`
    /// and its skeleton positions shifted by `pos_shift[comp]` (after mapping).
    pub fn append(&mut self, other: &Graph, comp_map: &[usize], pos_shift: &[u16]) -> u32 {
        let off = self.mate.len() as u32;
        self.mate.extend(
            other
                .mate
                .iter()
                .map(|&m| if m == NO_DART { NO_DART } else { m + off }),
        );
        self.tri.extend(
            other
                .tri
                .iter()
                .map(|t| [t[0] + off, t[1] + off, t[2] + off]),
        );
        for &(d, a) in &other.legs {
            let c = comp_map[a.comp()];
            let a = match a {
                Attach::Skeleton { pos, .. } => Attach::Skeleton {
                    comp: c as u8,
                    pos: pos + pos_shift.get(c).copied().unwrap_or(0),
                },
                Attach::Free { .. } => Attach::Free { comp: c as u8 },
            };
            self.legs.push((d + off, a));
        }
        self.loops += other.loops;
        off
    }

    /// Removes the listed pairs of legs and joins what hung off each pair, as if the two
    /// legs were plugged into each other. Chains through several removed legs are
    /// followed; cycles made only of removed legs become free loops.
    pub fn glue_legs(&self, pairs: &[(usize, usize)]) -> Graph {
        let mut conn = vec![NO_DART; self.mate.len()];
        for &(i, j) in pairs {
            let (a, b) = (self.legs[i].0, self.legs[j].0);
            conn[a as usize] = b;
            conn[b as usize] = a;
        }
        let removed = |d: u32| conn[d as usize] != NO_DART;
        let mut h = self.clone();
        h.legs = self
            .legs
            .iter()
            .copied()
            .filter(|&(d, _)| !removed(d))
            .collect();
        let mut seen = vec![false; self.mate.len()];
        let kept: Vec<u32> = h
            .tri
            .iter()
            .flatten()
            .copied()
            .chain(h.legs.iter().map(|&(d, _)| d))
            .collect();
        for x in kept {
            if seen[x as usize] || !removed(self.mate[x as usize]) {
                continue;
            }
            let mut y = self.mate[x as usize];
            let w = loop {
                seen[y as usize] = true;
                let z = conn[y as usize];
                seen[z as usize] = true;
                let w = self.mate[z as usize];
                if !removed(w) {
                    break w;
                }
                y = w;
            };
            seen[x as usize] = true;
            seen[w as usize] = true;
            h.link(x, w);
        }
        for &(i, _) in pairs {
            let start = self.legs[i].0;
            if seen[start as usize] {
                continue;
            }
            let mut y = start;
            loop {
                seen[y as usize] = true;
                let z = conn[y as usize];
                seen[z as usize] = true;
                y = self.mate[z as usize];
                if y == start {
                    break;
                }
            }
            h.loops += 1;
        }
        h
    }

    /// Reverses the cyclic order at one trivalent vertex.
    pub fn flip(&mut self, v: usize) {
        self.tri[v].swap(1, 2);
    }
}

/// Canonical diagram. Equal diagrams are isomorphic as oriented diagrams up to the
/// sign reported by canonicalization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Diagram {
    pub(crate) verts: Box<[Vertex]>,
    pub(crate) edges: Box<[(u16, u16)]>,
    pub(crate) loops: u32,
}

impl Diagram {
    pub fn empty() -> Self {
        Diagram {
            verts: Box::new([]),
            edges: Box::new([]),
            loops: 0,
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.verts
    }

    pub fn edges(&self) -> &[(u16, u16)] {
        &self.edges
    }

    pub fn loops(&self) -> u32 {
        self.loops
    }

    pub fn degree(&self) -> usize {
        self.verts.len() / 2
    }

    pub fn tri_count(&self) -> usize {
        self.verts
            .iter()
            .filter(|v| matches!(v, Vertex::Tri))
            .count()
    }

    pub fn legs(&self) -> impl Iterator<Item = Attach> + '_ {
        self.verts.iter().filter_map(|v| match v {
            Vertex::Leg(a) => Some(*a),
            Vertex::Tri => None,
        })
    }

    pub fn leg_count(&self) -> usize {
        self.legs().count()
    }

    pub fn legs_on(&self, comp: usize) -> usize {
        self.legs().filter(|a| a.comp() == comp).count()
    }

    pub fn leg_counts(&self, n_comps: usize) -> Vec<usize> {
        let mut c = vec![0; n_comps];
        for a in self.legs() {
            c[a.comp()] += 1;
        }
        c
    }

    pub fn to_graph(&self) -> Graph {
        let n = self.verts.len();
        let mut darts: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut g = Graph::new();
        for &(u, v) in self.edges.iter() {
            let (a, b) = g.edge();
            darts[u as usize].push(a);
            darts[v as usize].push(b);
        }
        for (i, v) in self.verts.iter().enumerate() {
            match v {
                Vertex::Leg(a) => {
                    g.add_leg(darts[i][0], *a);
                }
                Vertex::Tri => {
                    g.add_tri([darts[i][0], darts[i][1], darts[i][2]]);
                }
            }
        }
        g.loops = self.loops;
        g
    }

    /// Vertex ranges of the connected components. Canonical form keeps every
    /// component contiguous.
    pub fn blocks(&self) -> Vec<Range<usize>> {
        let n = self.verts.len();
        let mut reach = vec![0usize; n];
        for (i, r) in reach.iter_mut().enumerate() {
            *r = i;
        }
        for &(u, v) in self.edges.iter() {
            let (u, v) = (u as usize, v as usize);
            reach[u] = reach[u].max(v);
        }
        let mut out = Vec::new();
        let mut start = 0;
        let mut far = 0;
        for (i, &r) in reach.iter().enumerate().take(n) {
            far = far.max(r);
            if far == i {
                out.push(start..i + 1);
                start = i + 1;
            }
        }
        out
    }

    /// The sub-diagram on a block of vertices, renumbered from zero.
    pub fn block(&self, r: Range<usize>) -> Diagram {
        let lo = r.start as u16;
        let hi = r.end as u16;
        Diagram {
            verts: self.verts[r].to_vec().into_boxed_slice(),
            edges: self
                .edges
                .iter()
                .filter(|&&(u, _)| u >= lo && u < hi)
                .map(|&(u, v)| (u - lo, v - lo))
                .collect(),
            loops: 0,
        }
    }

    /// Components with their own canonical form; loops are dropped.
    pub fn components(&self) -> Vec<Diagram> {
        self.blocks().into_iter().map(|r| self.block(r)).collect()
    }

    /// True if some connected component has no legs at all.
    pub fn has_vacuum_component(&self) -> bool {
        self.loops > 0
            || self
                .blocks()
                .into_iter()
                .any(|r| self.verts[r].iter().all(|v| matches!(v, Vertex::Tri)))
    }

    /// True if some component is a single edge between two free legs in `comps`.
    pub fn has_strut_between(&self, comps: &[usize]) -> bool {
        self.blocks().into_iter().any(|r| {
            r.len() == 2
                && self.verts[r].iter().all(|v| matches!(v, Vertex::Leg(Attach::Free { comp }) if comps.contains(&(*comp as usize))))
        })
    }

    /// Graph made of the chosen blocks, skeleton positions renumbered in order.
    pub fn select_blocks(&self, blocks: &[Range<usize>], comp_map: &[usize]) -> Graph {
        let n = self.verts.len();
        let mut keep = vec![false; n];
        for r in blocks {
            for v in r.clone() {
                keep[v] = true;
            }
        }
        let mut positions: Vec<(Attach, usize)> = self
            .verts
            .iter()
            .enumerate()
            .filter_map(|(v, x)| match x {
                Vertex::Leg(a @ Attach::Skeleton { .. }) if keep[v] => Some((*a, v)),
                _ => None,
            })
            .collect();
        positions.sort();
        let mut rank = vec![0u16; n];
        let mut last: Option<usize> = None;
        let mut k = 0u16;
        for (a, v) in positions {
            if last != Some(a.comp()) {
                k = 0;
                last = Some(a.comp());
            }
            rank[v] = k;
            k += 1;
        }
        let mut darts: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut g = Graph::new();
        for &(u, v) in self.edges.iter() {
            if keep[u as usize] {
                let (a, b) = g.edge();
                darts[u as usize].push(a);
                darts[v as usize].push(b);
            }
        }
        for v in 0..n {
            if !keep[v] {
                continue;
            }
            match self.verts[v] {
                Vertex::Leg(Attach::Skeleton { comp, .. }) => {
                    g.add_leg(
                        darts[v][0],
                        Attach::Skeleton {
                            comp: comp_map[comp as usize] as u8,
                            pos: rank[v],
                        },
                    );
                }
                Vertex::Leg(Attach::Free { comp }) => {
                    g.add_leg(
                        darts[v][0],
                        Attach::Free {
                            comp: comp_map[comp as usize] as u8,
                        },
                    );
                }
                Vertex::Tri => {
                    g.add_tri([darts[v][0], darts[v][1], darts[v][2]]);
                }
            }
        }
        g
    }

    pub fn is_strut(&self) -> bool {
        self.verts.len() == 2 && self.verts.iter().all(|v| matches!(v, Vertex::Leg(_)))
    }
}
