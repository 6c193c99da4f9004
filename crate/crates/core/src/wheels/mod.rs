//! The wheels element, the wheeling map and the identities they satisfy.

mod verify;

use std::collections::BTreeMap;

use num_traits::Zero;

pub use verify::*;

use crate::calculus::{
    apply_diff_op, chi, disjoint_union_upto, exp_union, inner_product, log_union, relabel,
};
use crate::diagrams::{
    at, chords_graph, free, strut_graph, theta_graph, wheel_on, ComponentKind, Diagram, Signature,
};
use crate::error::{Error, Result};
use crate::rational::{q, Q};
use crate::series::{sinhc_half, Series};
use crate::spaces::LinComb;

/// Coefficient of `x^index` in `½ log(sinh(x/2)/(x/2))`.
pub fn modified_bernoulli(index: usize) -> Q {
    if index % 2 == 1 {
        return Q::zero();
    }
    half_log_sinhc(index).coeff(index)
}

fn half_log_sinhc(order: usize) -> Series {
    sinhc_half(order)
        .log()
        .expect("constant term is one")
        .scale(&q(1, 2))
}

/// Modified Bernoulli numbers `b_2n`, keyed by the even index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliTable {
    pub values: BTreeMap<usize, Q>,
}

impl BernoulliTable {
    /// All `b_2n` with `2n <= max_index`.
    pub fn compute(max_index: usize) -> Self {
        let s = half_log_sinhc(max_index);
        let values = (1..=max_index / 2)
            .map(|n| (2 * n, s.coeff(2 * n)))
            .collect();
        BernoulliTable { values }
    }

    pub fn get(&self, index: usize) -> Q {
        self.values.get(&index).cloned().unwrap_or_else(Q::zero)
    }

    /// Same table with one coefficient shifted by `delta`.
    pub fn perturbed(&self, index: usize, delta: &Q) -> Self {
        let mut t = self.clone();
        *t.values.entry(index).or_insert_with(Q::zero) += delta;
        t
    }

    pub fn max_index(&self) -> usize {
        self.values.keys().next_back().copied().unwrap_or(0)
    }
}

/// The wheel with `n` spokes on a single asterisk. Odd wheels vanish.
pub fn wheel(n: usize, label: &str) -> Result<LinComb> {
    LinComb::from_graph(Signature::asterisk(label), &wheel_on(n, 0)?)
}

/// A strut between two asterisk labels, or with both ends on one label.
pub fn strut(a: &str, b: &str) -> Result<LinComb> {
    if a == b {
        return LinComb::from_graph(Signature::asterisk(a), &strut_graph(free(0), free(0)));
    }
    let sig: Signature = format!("*{a},*{b}").parse()?;
    LinComb::from_graph(sig, &strut_graph(free(0), free(1)))
}

/// One chord on an interval.
pub fn chord(label: &str) -> Result<LinComb> {
    LinComb::from_graph(Signature::interval(label), &chords_graph(0, &[(0, 1)]))
}

pub fn theta() -> Result<LinComb> {
    LinComb::from_graph(Signature::empty(), &theta_graph())
}

/// A chord with both ends on a circle; used by the closed-skeleton checks.
pub fn circle_chord(label: &str) -> Result<LinComb> {
    let mut g = crate::diagrams::Graph::new();
    let (x, y) = g.edge();
    g.add_leg(x, at(0, 0));
    g.add_leg(y, at(0, 1));
    LinComb::from_graph(Signature::circle(label), &g)
}

/// `Ω = exp(∑ b_2n ω_2n)` truncated above `max_degree`.
#[derive(Clone, Debug)]
pub struct OmegaElement {
    pub max_degree: usize,
    pub label: String,
    pub table: BernoulliTable,
    pub lincomb: LinComb,
}

impl OmegaElement {
    /// `∑ b_2n ω_2n`, the logarithm of Ω.
    pub fn log(&self) -> Result<LinComb> {
        wheel_sum(&self.table, self.max_degree, &self.label)
    }

    /// The same element on another label or kind of free component.
    pub fn on(&self, label: &str, kind: ComponentKind) -> Result<LinComb> {
        let v = relabel(&self.lincomb, &self.label, label)?;
        v.reinterpret(Signature::single(kind, label))
    }

    pub fn degree_part(&self, n: usize) -> LinComb {
        self.lincomb.degree_part(n)
    }
}

fn wheel_sum(table: &BernoulliTable, max: usize, label: &str) -> Result<LinComb> {
    let mut sum = LinComb::zero(Signature::asterisk(label));
    for n in (2..=max).step_by(2) {
        sum.add_scaled(&wheel(n, label)?, &table.get(n))?;
    }
    Ok(sum)
}

pub fn omega(max_degree: usize) -> Result<OmegaElement> {
    omega_with(&BernoulliTable::compute(max_degree.max(2)), max_degree, "x")
}

/// Ω built from an arbitrary coefficient table.
pub fn omega_with(table: &BernoulliTable, max_degree: usize, label: &str) -> Result<OmegaElement> {
    if let Some(n) = (2..=max_degree)
        .step_by(2)
        .find(|n| !table.values.contains_key(n))
    {
        return Err(Error::Domain(format!(
            "the coefficient table has no entry for index {n}"
        )));
    }
    let log = wheel_sum(table, max_degree, label)?;
    let lincomb = exp_union(&log, max_degree)?;
    Ok(OmegaElement {
        max_degree,
        label: label.into(),
        table: table.clone(),
        lincomb,
    })
}

fn max_legs(d: &LinComb, label: &str) -> Result<usize> {
    let c = d.signature().require(label)?;
    Ok(d.terms().map(|(t, _)| t.legs_on(c)).max().unwrap_or(0))
}

/// `∂_Ω` on the `label` legs of `d`.
pub fn omega_op(d: &LinComb, omega: &OmegaElement, label: &str) -> Result<LinComb> {
    let need = max_legs(d, label)?;
    if omega.max_degree < need {
        return Err(Error::Domain(format!(
            "Ω is truncated at degree {} but the input has {need} legs",
            omega.max_degree
        )));
    }
    let op = omega.on(label, ComponentKind::Asterisk)?;
    apply_diff_op(&op, d, label)
}

/// The wheeling map `χ ∘ ∂_Ω` on the `label` legs.
pub fn upsilon(d: &LinComb, omega: &OmegaElement, label: &str) -> Result<LinComb> {
    chi(&omega_op(d, omega, label)?, label)
}

/// `exp(strut(x, z)) ∪ Ω_x` with the `z` legs symmetrized onto an interval.
pub fn h_zero_with(omega: &OmegaElement, x: &str, z: &str) -> Result<LinComb> {
    let n = omega.max_degree;
    let s = strut(z, x)?;
    let e = exp_union(&s, n)?;
    let w = omega.on(x, ComponentKind::Asterisk)?;
    let h = disjoint_union_upto(&e, &w, Some(n))?;
    chi(&h, z)
}

pub fn h_zero(max_degree: usize) -> Result<LinComb> {
    h_zero_with(&omega(max_degree)?, "x", "z")
}

/// Degree minus the number of legs on `label`.
pub fn mapping_degree(d: &Diagram, sig: &Signature, label: &str) -> Result<i64> {
    let c = sig.require(label)?;
    Ok(d.degree() as i64 - d.legs_on(c) as i64)
}

/// Pairs `d` against `h_zero` over `x`, returning a combination on the interval `x`.
pub fn phi_zero(d: &LinComb, omega: &OmegaElement) -> Result<LinComb> {
    let need = max_legs(d, &omega.label)?;
    if omega.max_degree < need {
        return Err(Error::Domain(format!(
            "Ω is truncated at degree {} but the input has {need} legs",
            omega.max_degree
        )));
    }
    let h = h_zero_with(omega, &omega.label, "z.")?;
    let glued = inner_product(&h, d, &[&omega.label])?;
    relabel(&glued, "z.", &omega.label)
}

/// `log Ω`, checked against the stored table.
pub fn log_omega(omega: &OmegaElement) -> Result<LinComb> {
    log_union(&omega.lincomb, omega.max_degree)
}
