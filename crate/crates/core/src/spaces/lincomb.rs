//! Formal rational combinations of canonical diagrams on a fixed signature.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::diagrams::{canonicalize, write_graph, Diagram, Graph, Signature};
use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb {
    sig: Signature,
    terms: BTreeMap<Diagram, Q>,
}

impl LinComb {
    pub fn zero(sig: Signature) -> Self {
        LinComb {
            sig,
            terms: BTreeMap::new(),
        }
    }

    /// The empty diagram with coefficient one.
    pub fn one(sig: Signature) -> Self {
        Self::from_diagram(sig, Diagram::empty(), Q::one())
    }

    pub fn from_diagram(sig: Signature, d: Diagram, c: Q) -> Self {
        let mut l = Self::zero(sig);
        l.add_diagram(d, c);
        l
    }

    pub fn from_graph(sig: Signature, g: &Graph) -> Result<Self> {
        let mut l = Self::zero(sig);
        l.add_graph(g, Q::one())?;
        Ok(l)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Diagram, &Q)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &Diagram) -> Q {
        self.terms.get(d).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_diagram(&mut self, d: Diagram, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `c` times the canonical form of `g`; zero diagrams contribute nothing.
    pub fn add_graph(&mut self, g: &Graph, c: Q) -> Result<()> {
        if let Some((d, s)) = canonicalize(g, &self.sig)? {
            self.add_diagram(d, if s < 0 { -c } else { c });
        }
        Ok(())
    }

    fn same_sig(&self, other: &LinComb) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::Signature(format!(
                "cannot combine [{}] with [{}]",
                self.sig, other.sig
            )));
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &LinComb, c: &Q) -> Result<()> {
        self.same_sig(other)?;
        for (d, x) in &other.terms {
            self.add_diagram(d.clone(), x * c);
        }
        Ok(())
    }

    pub fn plus(&self, other: &LinComb) -> Result<LinComb> {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one())?;
        Ok(out)
    }

    pub fn minus(&self, other: &LinComb) -> Result<LinComb> {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one())?;
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> LinComb {
        let mut out = LinComb::zero(self.sig.clone());
        for (d, x) in &self.terms {
            out.add_diagram(d.clone(), x * c);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Diagram, &Q) -> Q) -> LinComb {
        let mut out = LinComb::zero(self.sig.clone());
        for (d, x) in &self.terms {
            out.add_diagram(d.clone(), f(d, x));
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&Diagram) -> bool) -> LinComb {
        LinComb {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(d, _)| keep(d))
                .map(|(d, c)| (d.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn degree_part(&self, n: usize) -> LinComb {
        self.filter(|d| d.degree() == n)
    }

    pub fn truncate(&self, max: usize) -> LinComb {
        self.filter(|d| d.degree() <= max)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Diagram::degree).max()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Diagram::degree).min()
    }

    /// Same diagrams read on a signature with the same component count, e.g. after
    /// changing a component's kind between asterisk and circled asterisk or renaming.
    pub fn reinterpret(&self, sig: Signature) -> Result<LinComb> {
        if sig.len() != self.sig.len() {
            return Err(Error::Signature(
                "reinterpretation must keep the component count".into(),
            ));
        }
        for i in 0..sig.len() {
            if sig.kind(i).is_skeleton() != self.sig.kind(i).is_skeleton() {
                return Err(Error::Signature(format!(
                    "component {} cannot change between skeleton and free",
                    sig.label(i)
                )));
            }
        }
        if (0..sig.len()).all(|i| sig.kind(i) == self.sig.kind(i)) {
            return Ok(LinComb {
                sig,
                terms: self.terms.clone(),
            });
        }
        let mut out = LinComb::zero(sig);
        for (d, c) in &self.terms {
            out.add_graph(&d.to_graph(), c.clone())?;
        }
        Ok(out)
    }

    /// Re-expresses the combination on a larger signature that contains every label.
    pub fn embed(&self, target: &Signature) -> Result<LinComb> {
        let (merged, map) = target.merge(&self.sig)?;
        if merged != *target {
            return Err(Error::Signature(format!(
                "[{}] does not contain [{}]",
                target, self.sig
            )));
        }
        let ident_shift = vec![0u16; target.len()];
        let mut out = LinComb::zero(target.clone());
        for (d, c) in &self.terms {
            let mut g = Graph::new();
            g.append(&d.to_graph(), &map, &ident_shift);
            out.add_graph(&g, c.clone())?;
        }
        Ok(out)
    }

    pub fn into_terms(self) -> BTreeMap<Diagram, Q> {
        self.terms
    }

    pub fn text_terms(&self) -> Vec<(String, String)> {
        self.terms
            .iter()
            .map(|(d, c)| (c.to_string(), write_graph(&d.to_graph(), &self.sig, 1)))
            .collect()
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, d)) in self.text_terms().into_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c} * {d}")?;
        }
        Ok(())
    }
}
