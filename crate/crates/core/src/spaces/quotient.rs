//! Quotient of a stratum's span by its relation instances.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagrams::{ComponentKind, Diagram, Signature};
use crate::error::{Error, Result};
use crate::rational::Q;

use super::echelon::Echelon;
use super::enumerate::{enumerate, Filter, LegCounts};
use super::lincomb::LinComb;
use super::relations::{link_relations, local_relations_from, Relation, RelationKind, StuSign};

/// Identifies a stratum: signature, degree, filter and optionally the leg count of
/// every free component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StratumKey {
    pub signature: Signature,
    pub degree: usize,
    pub filter: Filter,
    pub legs: Option<LegCounts>,
}

impl StratumKey {
    pub fn new(signature: Signature, degree: usize, filter: Filter) -> Self {
        StratumKey {
            signature,
            degree,
            filter,
            legs: None,
        }
    }

    pub fn with_legs(mut self, legs: LegCounts) -> Self {
        self.legs = Some(legs);
        self
    }

    pub fn contains(&self, d: &Diagram) -> bool {
        if d.degree() != self.degree {
            return false;
        }
        if let Some(l) = &self.legs {
            let counts = d.leg_counts(self.signature.len());
            for c in 0..self.signature.len() {
                if self.signature.kind(c).is_free() && counts[c] != l[c] {
                    return false;
                }
            }
        }
        match self.filter {
            Filter::All => true,
            Filter::BoundaryConnected => !d.has_vacuum_component(),
            Filter::Connected => d.blocks().len() == 1,
        }
    }
}

type Row = (RelationKind, Vec<(usize, Q)>);

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Quotient {
    pub key: StratumKey,
    spanning: Vec<Diagram>,
    #[serde(skip)]
    index: HashMap<Diagram, usize>,
    echelon: Echelon,
    basis_cols: Vec<usize>,
    relation_counts: BTreeMap<RelationKind, usize>,
}

impl Quotient {
    pub fn build(key: StratumKey, stu: StuSign) -> Result<Self> {
        if key.filter == Filter::Connected
            && key
                .signature
                .components()
                .iter()
                .any(|c| c.kind != ComponentKind::Asterisk)
        {
            return Err(Error::Domain(
                "connected strata are only closed under the relations for asterisk components"
                    .into(),
            ));
        }
        let spanning = enumerate(&key.signature, key.degree, key.filter, key.legs.as_ref())?;
        let index: HashMap<Diagram, usize> = spanning
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, d)| (d, i))
            .collect();
        let to_row = |r: Relation| -> Result<Row> {
            let row = r
                .combination
                .terms()
                .map(|(t, c)| {
                    index.get(t).map(|&i| (i, c.clone())).ok_or_else(|| {
                        Error::Invariant(format!("relation term outside stratum {key:?}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((r.kind, row))
        };
        let sig = &key.signature;
        let mut per_diagram: Vec<Vec<Row>> = spanning
            .par_iter()
            .map(|d| {
                local_relations_from(d, sig, stu)?
                    .into_iter()
                    .map(to_row)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for y in (0..sig.len()).filter(|&y| sig.kind(y) == ComponentKind::CircledAsterisk) {
            let rows = link_relations(sig, y, key.degree, key.filter, key.legs.as_ref())?
                .into_iter()
                .map(to_row)
                .collect::<Result<Vec<_>>>()?;
            per_diagram.push(rows);
        }
        let mut echelon = Echelon::new(spanning.len());
        let mut relation_counts = BTreeMap::new();
        for rows in per_diagram {
            for (kind, row) in rows {
                *relation_counts.entry(kind).or_insert(0) += 1;
                if !row.is_empty() {
                    echelon.insert(row);
                }
            }
        }
        echelon.reduce();
        let basis_cols = (0..spanning.len())
            .filter(|&c| !echelon.is_pivot(c))
            .collect();
        Ok(Quotient {
            key,
            spanning,
            index,
            echelon,
            basis_cols,
            relation_counts,
        })
    }

    pub(crate) fn reindex(&mut self) {
        self.index = self
            .spanning
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, d)| (d, i))
            .collect();
    }

    pub fn signature(&self) -> &Signature {
        &self.key.signature
    }

    pub fn degree(&self) -> usize {
        self.key.degree
    }

    pub fn dim(&self) -> usize {
        self.basis_cols.len()
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn spanning(&self) -> &[Diagram] {
        &self.spanning
    }

    pub fn basis(&self) -> Vec<&Diagram> {
        self.basis_cols.iter().map(|&c| &self.spanning[c]).collect()
    }

    pub fn basis_element(&self, i: usize) -> LinComb {
        LinComb::from_diagram(
            self.key.signature.clone(),
            self.spanning[self.basis_cols[i]].clone(),
            Q::from_integer(1.into()),
        )
    }

    pub fn relation_counts(&self) -> &BTreeMap<RelationKind, usize> {
        &self.relation_counts
    }

    pub fn contains(&self, d: &Diagram) -> bool {
        self.index.contains_key(d)
    }

    /// Sparse coordinates in the basis. Every term must lie in this stratum.
    pub fn normal_form(&self, v: &LinComb) -> Result<BTreeMap<usize, Q>> {
        if v.signature() != &self.key.signature {
            return Err(Error::Signature(format!(
                "combination on [{}] reduced in a stratum of [{}]",
                v.signature(),
                self.key.signature
            )));
        }
        let mut cols: BTreeMap<usize, Q> = BTreeMap::new();
        for (d, c) in v.terms() {
            let &i = self.index.get(d).ok_or_else(|| {
                Error::Domain(format!(
                    "diagram of degree {} is not in the stratum {:?} of degree {}",
                    d.degree(),
                    self.key.filter,
                    self.key.degree
                ))
            })?;
            *cols.entry(i).or_insert_with(Q::zero) += c;
        }
        self.coords_of_columns(&cols)
    }

    pub fn normal_form_of(&self, d: &Diagram) -> Result<BTreeMap<usize, Q>> {
        let &i = self
            .index
            .get(d)
            .ok_or_else(|| Error::Domain("diagram is not in this stratum".into()))?;
        self.coords_of_columns(&[(i, Q::from_integer(1.into()))].into_iter().collect())
    }

    fn coords_of_columns(&self, cols: &BTreeMap<usize, Q>) -> Result<BTreeMap<usize, Q>> {
        let rem = self.echelon.remainder(cols);
        rem.into_iter()
            .map(|(c, x)| {
                self.basis_cols
                    .binary_search(&c)
                    .map(|i| (i, x))
                    .map_err(|_| Error::Invariant("remainder on a pivot column".into()))
            })
            .collect()
    }

    pub fn dense(&self, coords: &BTreeMap<usize, Q>) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        for (i, x) in coords {
            v[*i] = x.clone();
        }
        v
    }

    pub fn lift(&self, coords: &BTreeMap<usize, Q>) -> LinComb {
        let mut out = LinComb::zero(self.key.signature.clone());
        for (i, x) in coords {
            out.add_diagram(self.spanning[self.basis_cols[*i]].clone(), x.clone());
        }
        out
    }
}
