//! Enumeration of canonical diagrams of a given degree.
//!
//! Vertices are laid out by class (each skeleton leg alone, the legs of each free
//! component, then trivalent vertices). Stubs are paired depth first, always closing the
//! lowest open stub of a vertex already reached, and only ever opening the first
//! untouched vertex of a class. Canonicalization removes the remaining duplicates.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagrams::{at, canonicalize, free, Attach, Diagram, Graph, Signature};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Filter {
    /// Every diagram, vacuum components included.
    All,
    /// No component without legs.
    BoundaryConnected,
    /// Exactly one connected component.
    Connected,
}

/// Per-component leg counts. Only entries for free components constrain anything.
pub type LegCounts = Vec<usize>;

pub(crate) fn distributions(
    sig: &Signature,
    degree: usize,
    legs: Option<&LegCounts>,
) -> Vec<(usize, Vec<usize>)> {
    let total = 2 * degree;
    let mut out = Vec::new();
    let mut counts = vec![0usize; sig.len()];
    fn rec(
        sig: &Signature,
        legs: Option<&LegCounts>,
        i: usize,
        left: usize,
        counts: &mut Vec<usize>,
        out: &mut Vec<(usize, Vec<usize>)>,
    ) {
        if i == sig.len() {
            out.push((left, counts.clone()));
            return;
        }
        if let (Some(l), true) = (legs, sig.kind(i).is_free()) {
            if l[i] <= left {
                counts[i] = l[i];
                rec(sig, legs, i + 1, left - l[i], counts, out);
            }
            return;
        }
        for k in 0..=left {
            counts[i] = k;
            rec(sig, legs, i + 1, left - k, counts, out);
        }
    }
    rec(sig, legs, 0, total, &mut counts, &mut out);
    out
}

pub fn enumerate(
    sig: &Signature,
    degree: usize,
    filter: Filter,
    legs: Option<&LegCounts>,
) -> Result<Vec<Diagram>> {
    let dists = distributions(sig, degree, legs);
    let found: Vec<HashSet<Diagram>> = dists
        .par_iter()
        .map(|(t, counts)| Pairing::new(sig, *t, counts, filter).run())
        .collect::<Result<_>>()?;
    let mut all: Vec<Diagram> = found.into_iter().flatten().collect();
    all.sort_by(|a, b| b.tri_count().cmp(&a.tri_count()).then_with(|| a.cmp(b)));
    all.dedup();
    Ok(all)
}

struct Pairing<'a> {
    sig: &'a Signature,
    filter: Filter,
    attach: Vec<Option<Attach>>,
    class: Vec<usize>,
    class_next: Vec<usize>,
    class_end: Vec<usize>,
    open: Vec<u8>,
    touched: Vec<bool>,
    edges: Vec<(usize, usize)>,
    out: HashSet<Diagram>,
    err: Option<crate::error::Error>,
}

impl<'a> Pairing<'a> {
    fn new(sig: &'a Signature, t: usize, counts: &[usize], filter: Filter) -> Self {
        let mut attach = Vec::new();
        let mut class = Vec::new();
        let mut class_next = Vec::new();
        let mut class_end = Vec::new();
        for (c, &k) in counts.iter().enumerate() {
            if sig.kind(c).is_skeleton() {
                for p in 0..k {
                    class_next.push(attach.len());
                    class.push(class_next.len() - 1);
                    attach.push(Some(at(c, p)));
                    class_end.push(attach.len());
                }
            } else if k > 0 {
                class_next.push(attach.len());
                for _ in 0..k {
                    class.push(class_next.len() - 1);
                    attach.push(Some(free(c)));
                }
                class_end.push(attach.len());
            }
        }
        if t > 0 {
            class_next.push(attach.len());
            for _ in 0..t {
                class.push(class_next.len() - 1);
                attach.push(None);
            }
            class_end.push(attach.len());
        }
        let open = attach
            .iter()
            .map(|a| if a.is_some() { 1 } else { 3 })
            .collect();
        let n = attach.len();
        Pairing {
            sig,
            filter,
            attach,
            class,
            class_next,
            class_end,
            open,
            touched: vec![false; n],
            edges: Vec::new(),
            out: HashSet::new(),
            err: None,
        }
    }

    fn run(mut self) -> Result<HashSet<Diagram>> {
        if self.attach.is_empty() {
            if self.filter != Filter::Connected {
                self.out.insert(Diagram::empty());
            }
            return Ok(self.out);
        }
        self.step();
        match self.err {
            Some(e) => Err(e),
            None => Ok(self.out),
        }
    }

    fn touch(&mut self, v: usize) -> bool {
        if self.touched[v] {
            return false;
        }
        self.touched[v] = true;
        self.class_next[self.class[v]] += 1;
        true
    }

    fn untouch(&mut self, v: usize) {
        self.touched[v] = false;
        self.class_next[self.class[v]] -= 1;
    }

    fn step(&mut self) {
        if self.err.is_some() {
            return;
        }
        let n = self.attach.len();
        let pivot = (0..n).find(|&v| self.touched[v] && self.open[v] > 0);
        let (p, fresh) = match pivot {
            Some(p) => (p, false),
            None => {
                let Some(v) = (0..n).find(|&v| self.open[v] > 0) else {
                    self.emit();
                    return;
                };
                match self.filter {
                    Filter::Connected if !self.edges.is_empty() => return,
                    Filter::BoundaryConnected if self.attach[v].is_none() => return,
                    _ => {}
                }
                self.touch(v);
                (v, true)
            }
        };
        let mut partners: Vec<usize> = (0..n)
            .filter(|&w| w != p && self.touched[w] && self.open[w] > 0)
            .collect();
        for c in 0..self.class_next.len() {
            let w = self.class_next[c];
            if w < self.class_end[c] && w != p {
                partners.push(w);
            }
        }
        for q in partners {
            let newly = self.touch(q);
            self.open[p] -= 1;
            self.open[q] -= 1;
            self.edges.push((p, q));
            self.step();
            self.edges.pop();
            self.open[p] += 1;
            self.open[q] += 1;
            if newly {
                self.untouch(q);
            }
        }
        if fresh {
            self.untouch(p);
        }
    }

    fn emit(&mut self) {
        let n = self.attach.len();
        let mut darts: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut g = Graph::new();
        for &(u, v) in &self.edges {
            let (a, b) = g.edge();
            darts[u].push(a);
            darts[v].push(b);
        }
        for (v, d) in darts.iter().enumerate().take(n) {
            match self.attach[v] {
                Some(a) => {
                    g.add_leg(d[0], a);
                }
                None => {
                    g.add_tri([d[0], d[1], d[2]]);
                }
            }
        }
        match canonicalize(&g, self.sig) {
            Ok(Some((d, _))) => {
                self.out.insert(d);
            }
            Ok(None) => {}
            Err(e) => self.err = Some(e),
        }
    }
}
