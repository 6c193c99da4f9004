//! Canonical labelling with orientation sign.
//!
//! Each connected component is labelled by individualization-refinement over ordered
//! partitions, exploring every leaf. The component code is the minimum over leaves of
//! (vertex colours, sorted edge list). Two minimal leaves with different orientation
//! parity witness an orientation-reversing automorphism, so the diagram is zero.

use super::graph::{Attach, Diagram, Graph, Owner, Vertex, NO_DART};
use super::signature::{ComponentKind, Signature};
use crate::error::{Error, Result};

/// Sign relative to the canonical representative, or `None` for a diagram equal to its
/// own negative (tadpole or odd automorphism).
pub type Canonical = Option<(Diagram, i8)>;

pub fn canonicalize(g: &Graph, sig: &Signature) -> Result<Canonical> {
    let shape = Shape::build(g, sig)?;
    if shape.tadpole {
        return Ok(None);
    }
    let circles: Vec<(usize, u16)> = (0..sig.len())
        .filter(|&c| sig.kind(c) == ComponentKind::Circle)
        .map(|c| (c, shape.skeleton_len[c]))
        .filter(|&(_, k)| k > 1)
        .collect();

    let fixed: Vec<bool> = shape
        .comps
        .iter()
        .map(|vs| {
            !vs.iter().any(|&v| match shape.vertex[v] {
                Vertex::Leg(Attach::Skeleton { comp, .. }) => {
                    circles.iter().any(|&(c, _)| c == comp as usize)
                }
                _ => false,
            })
        })
        .collect();

    let mut cached: Vec<Option<Labelled>> = vec![None; shape.comps.len()];
    let mut best: Option<(Vec<Labelled>, i8)> = None;
    let mut conflict = false;
    let mut rot = vec![0u16; circles.len()];
    loop {
        let mut parts = Vec::with_capacity(shape.comps.len());
        for (ci, vs) in shape.comps.iter().enumerate() {
            let lab = if fixed[ci] {
                if cached[ci].is_none() {
                    cached[ci] = Some(shape.label_component(vs, &circles, &rot));
                }
                cached[ci].clone().unwrap()
            } else {
                shape.label_component(vs, &circles, &rot)
            };
            if lab.zero {
                return Ok(None);
            }
            parts.push(lab);
        }
        parts.sort_by(|a, b| a.code.cmp(&b.code));
        let sign: i8 = parts.iter().map(|p| p.sign).product();
        match &best {
            None => best = Some((parts, sign)),
            Some((b, s)) => {
                let ord = cmp_parts(&parts, b);
                if ord.is_lt() {
                    best = Some((parts, sign));
                    conflict = false;
                } else if ord.is_eq() && sign != *s {
                    conflict = true;
                }
            }
        }
        // next rotation
        let mut i = 0;
        while i < circles.len() {
            rot[i] += 1;
            if rot[i] < circles[i].1 {
                break;
            }
            rot[i] = 0;
            i += 1;
        }
        if i == circles.len() {
            break;
        }
    }
    if conflict {
        return Ok(None);
    }
    let (parts, sign) = best.expect("at least one rotation");
    let mut verts = Vec::with_capacity(shape.vertex.len());
    let mut edges = Vec::new();
    for p in &parts {
        let off = verts.len() as u16;
        let m = p.code[0] as usize;
        verts.extend(p.code[1..1 + m].iter().map(|&c| Vertex::from_color(c)));
        let e = p.code[1 + m] as usize;
        let base = 2 + m;
        for k in 0..e {
            edges.push((
                p.code[base + 2 * k] as u16 + off,
                p.code[base + 2 * k + 1] as u16 + off,
            ));
        }
    }
    Ok(Some((
        Diagram {
            verts: verts.into_boxed_slice(),
            edges: edges.into_boxed_slice(),
            loops: g.loops,
        },
        sign,
    )))
}

fn cmp_parts(a: &[Labelled], b: &[Labelled]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.code.cmp(&y.code);
        if o.is_ne() {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

#[derive(Clone, Debug)]
struct Labelled {
    code: Vec<u32>,
    sign: i8,
    zero: bool,
}

struct Shape {
    vertex: Vec<Vertex>,
    darts: Vec<Vec<u32>>,
    owner: Vec<u32>,
    mate: Vec<u32>,
    comps: Vec<Vec<usize>>,
    skeleton_len: Vec<u16>,
    tadpole: bool,
}

impl Shape {
    fn build(g: &Graph, sig: &Signature) -> Result<Shape> {
        let nl = g.legs.len();
        let n = nl + g.tri.len();
        if n > u16::MAX as usize {
            return Err(Error::Structural("too many vertices".into()));
        }
        let owners = g.owners();
        let mut seen = vec![false; g.mate.len()];
        let mut claim = |d: u32| -> Result<()> {
            let i = d as usize;
            if i >= seen.len() {
                return Err(Error::Structural(format!("dart {d} out of range")));
            }
            if seen[i] {
                return Err(Error::Structural(format!("dart {d} used twice")));
            }
            seen[i] = true;
            Ok(())
        };
        for &(d, _) in &g.legs {
            claim(d)?;
        }
        for t in &g.tri {
            for &d in t {
                claim(d)?;
            }
        }
        let mut owner = vec![u32::MAX; g.mate.len()];
        for (d, o) in owners.iter().enumerate() {
            owner[d] = match *o {
                Owner::None => continue,
                Owner::Leg(i) => i,
                Owner::Tri(i) => nl as u32 + i,
            };
            let m = g.mate[d];
            if m == NO_DART || m as usize >= g.mate.len() || m as usize == d {
                return Err(Error::Structural(format!("dart {d} has no partner")));
            }
            if g.mate[m as usize] as usize != d || owners[m as usize] == Owner::None {
                return Err(Error::Structural(format!(
                    "dart {d} is paired inconsistently"
                )));
            }
        }

        let mut skeleton_pos: Vec<Vec<u16>> = vec![Vec::new(); sig.len()];
        let mut vertex = Vec::with_capacity(n);
        let mut darts = Vec::with_capacity(n);
        for &(d, a) in &g.legs {
            let c = a.comp();
            if c >= sig.len() {
                return Err(Error::Structural(format!("leg on missing component {c}")));
            }
            match a {
                Attach::Skeleton { pos, .. } => {
                    if !sig.kind(c).is_skeleton() {
                        return Err(Error::Structural(format!(
                            "positioned leg on free component {}",
                            sig.label(c)
                        )));
                    }
                    skeleton_pos[c].push(pos);
                }
                Attach::Free { .. } => {
                    if sig.kind(c).is_skeleton() {
                        return Err(Error::Structural(format!(
                            "unpositioned leg on skeleton component {}",
                            sig.label(c)
                        )));
                    }
                }
            }
            vertex.push(Vertex::Leg(a));
            darts.push(vec![d]);
        }
        let mut skeleton_len = vec![0u16; sig.len()];
        for (c, ps) in skeleton_pos.iter_mut().enumerate() {
            ps.sort_unstable();
            if ps.iter().enumerate().any(|(i, &p)| p as usize != i) {
                return Err(Error::Structural(format!(
                    "leg positions on {} are not 0..k",
                    sig.label(c)
                )));
            }
            skeleton_len[c] = ps.len() as u16;
        }
        for t in &g.tri {
            vertex.push(Vertex::Tri);
            darts.push(t.to_vec());
        }

        let tadpole = g.tri.iter().any(|t| {
            t.iter()
                .any(|&d| owner[g.mate[d as usize] as usize] == owner[d as usize])
        });

        let mut comp_of = vec![usize::MAX; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if comp_of[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![s];
            comp_of[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                for &d in &darts[v] {
                    let u = owner[g.mate[d as usize] as usize] as usize;
                    if comp_of[u] == usize::MAX {
                        comp_of[u] = id;
                        members.push(u);
                    }
                }
                i += 1;
            }
            comps.push(members);
        }
        Ok(Shape {
            vertex,
            darts,
            owner,
            mate: g.mate.clone(),
            comps,
            skeleton_len,
            tadpole,
        })
    }

    fn color(&self, v: usize, circles: &[(usize, u16)], rot: &[u16]) -> u32 {
        match self.vertex[v] {
            Vertex::Leg(Attach::Skeleton { comp, pos }) => {
                let mut pos = pos;
                if let Some(i) = circles.iter().position(|&(c, _)| c == comp as usize) {
                    let k = circles[i].1;
                    pos = (pos + k - rot[i]) % k;
                }
                Vertex::Leg(Attach::Skeleton { comp, pos }).color()
            }
            other => other.color(),
        }
    }

    fn label_component(&self, vs: &[usize], circles: &[(usize, u16)], rot: &[u16]) -> Labelled {
        let m = vs.len();
        let mut local = std::collections::HashMap::with_capacity(m);
        for (i, &v) in vs.iter().enumerate() {
            local.insert(v, i as u32);
        }
        let color: Vec<u32> = vs.iter().map(|&v| self.color(v, circles, rot)).collect();
        let mut adj = vec![Vec::new(); m];
        let mut edges = Vec::new();
        let mut tri = Vec::new();
        for (i, &v) in vs.iter().enumerate() {
            for &d in &self.darts[v] {
                let e = self.mate[d as usize];
                let u = local[&(self.owner[e as usize] as usize)];
                adj[i].push(u);
                if d < e {
                    edges.push((i as u32, u, d, e));
                }
            }
            if matches!(self.vertex[v], Vertex::Tri) {
                let t = &self.darts[v];
                tri.push([t[0], t[1], t[2]]);
            }
        }
        let ctx = Refiner { m, adj, edges, tri };
        let mut cells = color.clone();
        ctx.refine(&mut cells);
        let mut best = Best {
            code: None,
            sign: 1,
            conflict: false,
            color,
        };
        let mut scratch = Vec::new();
        ctx.search(cells, &mut best, &mut scratch);
        Labelled {
            code: best.code.unwrap(),
            sign: best.sign,
            zero: best.conflict,
        }
    }
}

struct Refiner {
    m: usize,
    adj: Vec<Vec<u32>>,
    edges: Vec<(u32, u32, u32, u32)>,
    tri: Vec<[u32; 3]>,
}

struct Best {
    code: Option<Vec<u32>>,
    sign: i8,
    conflict: bool,
    color: Vec<u32>,
}

impl Refiner {
    /// Equitable refinement; cell ids are ranks and preserve the previous order.
    fn refine(&self, cells: &mut [u32]) {
        let mut count = distinct(cells);
        loop {
            let mut keyed: Vec<(u32, Vec<u32>, usize)> = (0..self.m)
                .map(|v| {
                    let mut nb: Vec<u32> = self.adj[v].iter().map(|&u| cells[u as usize]).collect();
                    nb.sort_unstable();
                    (cells[v], nb, v)
                })
                .collect();
            keyed.sort_unstable();
            let mut c = 0u32;
            for i in 0..keyed.len() {
                if i > 0 && (keyed[i].0 != keyed[i - 1].0 || keyed[i].1 != keyed[i - 1].1) {
                    c += 1;
                }
                cells[keyed[i].2] = c;
            }
            let nc = c as usize + 1;
            if nc == count {
                break;
            }
            count = nc;
        }
    }

    fn search(&self, cells: Vec<u32>, best: &mut Best, scratch: &mut Vec<(u32, u32, u32, u32)>) {
        let mut size = vec![0u32; self.m];
        for &c in &cells {
            size[c as usize] += 1;
        }
        match (0..self.m).find(|&c| size[c] > 1) {
            None => self.leaf(&cells, best, scratch),
            Some(target) => {
                let target = target as u32;
                for v in 0..self.m {
                    if cells[v] != target {
                        continue;
                    }
                    let mut next: Vec<u32> = cells
                        .iter()
                        .enumerate()
                        .map(|(u, &c)| 2 * c + u32::from(c == target && u != v))
                        .collect();
                    self.refine(&mut next);
                    self.search(next, best, scratch);
                }
            }
        }
    }

    fn leaf(&self, pos: &[u32], best: &mut Best, scratch: &mut Vec<(u32, u32, u32, u32)>) {
        let m = self.m;
        let mut code = Vec::with_capacity(2 + m + 2 * self.edges.len());
        code.push(m as u32);
        code.resize(1 + m, 0);
        for v in 0..m {
            code[1 + pos[v] as usize] = best.color[v];
        }
        scratch.clear();
        for &(u, v, du, dv) in &self.edges {
            let (pu, pv) = (pos[u as usize], pos[v as usize]);
            scratch.push(if pu <= pv {
                (pu, pv, du, dv)
            } else {
                (pv, pu, dv, du)
            });
        }
        scratch.sort_unstable();
        code.push(scratch.len() as u32);
        for &(a, b, _, _) in scratch.iter() {
            code.push(a);
            code.push(b);
        }
        let ord = match &best.code {
            None => std::cmp::Ordering::Less,
            Some(b) => code.cmp(b),
        };
        if ord.is_gt() {
            return;
        }
        let id = |d: u32| -> u32 {
            for (k, &(_, _, x, y)) in scratch.iter().enumerate() {
                if x == d {
                    return 2 * k as u32;
                }
                if y == d {
                    return 2 * k as u32 + 1;
                }
            }
            unreachable!("dart belongs to the component")
        };
        let mut sign = 1i8;
        for t in &self.tri {
            let (a, b, c) = (id(t[0]), id(t[1]), id(t[2]));
            let inv = u8::from(a > b) + u8::from(a > c) + u8::from(b > c);
            if inv % 2 == 1 {
                sign = -sign;
            }
        }
        if ord.is_lt() {
            best.code = Some(code);
            best.sign = sign;
            best.conflict = false;
        } else if sign != best.sign {
            best.conflict = true;
        }
    }
}

fn distinct(cells: &[u32]) -> usize {
    let mut v = cells.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}
