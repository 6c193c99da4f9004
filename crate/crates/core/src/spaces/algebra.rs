//! Normal forms in B spaces over asterisks, written as polynomials in the connected
//! strata. Only connected strata have to be built, which keeps high degrees cheap.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::diagrams::{canonicalize, ComponentKind, Diagram, Signature};
use crate::error::{Error, Result};
use crate::rational::Q;

use super::engine::Engine;
use super::enumerate::Filter;
use super::lincomb::LinComb;
use super::quotient::StratumKey;
use super::Block;

/// A basis vector of a connected stratum.
pub type Factor = (Block, usize);

/// Sorted multisets of factors with their coefficients.
pub type Poly = BTreeMap<Vec<Factor>, Q>;

fn check_asterisks(sig: &Signature) -> Result<()> {
    if sig
        .components()
        .iter()
        .any(|c| c.kind != ComponentKind::Asterisk)
    {
        return Err(Error::Domain(format!(
            "connected normal forms need asterisk components only, got [{sig}]"
        )));
    }
    Ok(())
}

fn component_form(
    engine: &Engine,
    sig: &Signature,
    comp: &Diagram,
) -> Result<Vec<(Block, usize, Q)>> {
    let ident: Vec<usize> = (0..sig.len()).collect();
    let all = 0..comp.vertices().len();
    let g = comp.select_blocks(std::slice::from_ref(&all), &ident);
    let Some((d, sign)) = canonicalize(&g, sig)? else {
        return Ok(Vec::new());
    };
    let block = super::block_of(&d, sig);
    let key = StratumKey::new(sig.clone(), block.0, Filter::Connected).with_legs(block.1.clone());
    let q = engine.quotient(&key)?;
    let nf = q.normal_form(&LinComb::from_diagram(
        sig.clone(),
        d,
        Q::from_integer(sign.into()),
    ))?;
    Ok(nf.into_iter().map(|(i, x)| (block.clone(), i, x)).collect())
}

/// Normal form of `v` as a polynomial in connected basis elements.
pub fn connected_normal_form(engine: &Engine, v: &LinComb) -> Result<Poly> {
    let sig = v.signature();
    check_asterisks(sig)?;
    let mut cache: HashMap<Diagram, Vec<(Block, usize, Q)>> = HashMap::new();
    let mut out = Poly::new();
    for (d, c) in v.terms() {
        if d.loops() > 0 {
            return Err(Error::Domain(
                "free loops have no connected normal form".into(),
            ));
        }
        let mut partial: Vec<(Vec<Factor>, Q)> = vec![(Vec::new(), c.clone())];
        for comp in d.components() {
            if !cache.contains_key(&comp) {
                let terms = component_form(engine, sig, &comp)?;
                cache.insert(comp.clone(), terms);
            }
            let terms = &cache[&comp];
            let mut next = Vec::with_capacity(partial.len() * terms.len());
            for (mono, x) in &partial {
                for (b, i, y) in terms {
                    let mut m = mono.clone();
                    m.push((b.clone(), *i));
                    next.push((m, x * y));
                }
            }
            partial = next;
            if partial.is_empty() {
                break;
            }
        }
        for (mut m, x) in partial {
            m.sort();
            let e = out.entry(m).or_insert_with(Q::zero);
            *e += x;
        }
    }
    out.retain(|_, x| !x.is_zero());
    Ok(out)
}

/// Human-readable monomial, for reports.
pub fn format_monomial(m: &[Factor]) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter()
        .map(|((deg, legs), i)| format!("c{deg}{legs:?}#{i}"))
        .collect::<Vec<_>>()
        .join("*")
}
