//! Graded diagram spaces as quotients of enumerated spans by relation instances.

mod algebra;
mod echelon;
mod engine;
mod enumerate;
mod lincomb;
mod quotient;
mod relations;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use algebra::{connected_normal_form, format_monomial, Factor, Poly};
pub use echelon::{dense_rank, solve_dense, Echelon, SparseRow};
pub use engine::{Engine, EngineConfig, CACHE_ENV, CODE_VERSION, DEFAULT_MAX_DEGREE};
pub use enumerate::{enumerate, Filter, LegCounts};
pub use lincomb::LinComb;
pub use quotient::{Quotient, StratumKey};
pub use relations::{
    link_relation, link_relations, local_relations_from, marked_signature, Relation, RelationKind,
    StuSign,
};

use crate::diagrams::{Diagram, Signature};
use crate::error::Result;
use crate::rational::Q;

/// Degree and free-component leg counts. Every relation preserves both.
pub type Block = (usize, LegCounts);

pub fn block_of(d: &Diagram, sig: &Signature) -> Block {
    let mut legs = d.leg_counts(sig.len());
    for (c, l) in legs.iter_mut().enumerate() {
        if sig.kind(c).is_skeleton() {
            *l = 0;
        }
    }
    (d.degree(), legs)
}

pub fn block_key(sig: &Signature, block: &Block, filter: Filter) -> StratumKey {
    StratumKey::new(sig.clone(), block.0, filter).with_legs(block.1.clone())
}

/// Coordinates of a combination, block by block.
pub type Coords = BTreeMap<Block, BTreeMap<usize, Q>>;

/// The filter a combination can be reduced in: boundary connected when no term has a
/// vacuum component, the full space otherwise.
pub fn natural_filter(v: &LinComb) -> Filter {
    if v.terms().all(|(d, _)| !d.has_vacuum_component()) {
        Filter::BoundaryConnected
    } else {
        Filter::All
    }
}

/// Whole stratum of a degree, as printed by `basis`.
pub fn quotient_basis(
    engine: &Engine,
    sig: &Signature,
    degree: usize,
    filter: Filter,
) -> Result<Arc<Quotient>> {
    engine.quotient(&StratumKey::new(sig.clone(), degree, filter))
}

pub fn relation_instances(
    sig: &Signature,
    degree: usize,
    filter: Filter,
    stu: StuSign,
) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for d in enumerate(sig, degree, filter, None)? {
        out.extend(local_relations_from(&d, sig, stu)?);
    }
    for y in 0..sig.len() {
        if sig.kind(y) == crate::diagrams::ComponentKind::CircledAsterisk {
            out.extend(link_relations(sig, y, degree, filter, None)?);
        }
    }
    Ok(out)
}

pub fn split_blocks(v: &LinComb) -> BTreeMap<Block, LinComb> {
    let mut parts: BTreeMap<Block, LinComb> = BTreeMap::new();
    for (d, c) in v.terms() {
        parts
            .entry(block_of(d, v.signature()))
            .or_insert_with(|| LinComb::zero(v.signature().clone()))
            .add_diagram(d.clone(), c.clone());
    }
    parts
}

pub fn normal_form(engine: &Engine, v: &LinComb, filter: Filter) -> Result<Coords> {
    let mut out = Coords::new();
    for (block, part) in split_blocks(v) {
        let q = engine.quotient(&block_key(v.signature(), &block, filter))?;
        let nf = q.normal_form(&part)?;
        if !nf.is_empty() {
            out.insert(block, nf);
        }
    }
    Ok(out)
}

/// Canonical representative: the normal form written back in basis diagrams.
pub fn reduce(engine: &Engine, v: &LinComb, filter: Filter) -> Result<LinComb> {
    let mut out = LinComb::zero(v.signature().clone());
    for (block, part) in split_blocks(v) {
        let q = engine.quotient(&block_key(v.signature(), &block, filter))?;
        out.add_scaled(&q.lift(&q.normal_form(&part)?), &Q::from_integer(1.into()))?;
    }
    Ok(out)
}

pub fn is_zero_mod(engine: &Engine, v: &LinComb) -> Result<bool> {
    Ok(normal_form(engine, v, natural_filter(v))?.is_empty())
}

pub fn equal_mod(engine: &Engine, a: &LinComb, b: &LinComb) -> Result<bool> {
    is_zero_mod(engine, &a.minus(b)?)
}

/// Joins the two ends of the interval `label` into a circle.
pub fn close_interval(v: &LinComb, label: &str) -> Result<LinComb> {
    let sig = v.signature();
    let c = sig.require(label)?;
    if sig.kind(c) != crate::diagrams::ComponentKind::Interval {
        return Err(crate::error::Error::Domain(format!(
            "{label:?} is not an interval"
        )));
    }
    v.reinterpret(sig.with_kind(label, crate::diagrams::ComponentKind::Circle)?)
}

#[cfg(test)]
mod tests;
