//! Operations on diagram combinations: products, symmetrization, gluing, coproducts.

mod perm;

use num_traits::{One, Zero};

pub use perm::{for_each_assignment, for_each_injection, for_each_permutation};

use crate::diagrams::{Attach, Component, ComponentKind, Diagram, Graph, Signature};
use crate::error::{Error, Result};
use crate::rational::{qfact, Q};
use crate::spaces::{
    block_key, natural_filter, solve_dense, split_blocks, Block, Engine, Filter, LinComb, Quotient,
};

fn free_comp(sig: &Signature, label: &str) -> Result<usize> {
    let c = sig.require(label)?;
    if !sig.kind(c).is_free() {
        return Err(Error::Domain(format!(
            "component {label:?} must be an asterisk"
        )));
    }
    Ok(c)
}

fn skeleton_clash(
    sig_a: &Signature,
    da: &Diagram,
    sig_b: &Signature,
    db: &Diagram,
    map: &[usize],
    except: Option<usize>,
) -> Result<()> {
    for (i, &m) in map.iter().enumerate().take(sig_b.len()) {
        if Some(i) == except || !sig_b.kind(i).is_skeleton() || db.legs_on(i) == 0 {
            continue;
        }
        if m < sig_a.len() && da.legs_on(m) > 0 {
            return Err(Error::Domain(format!(
                "both factors have legs on skeleton component {:?}",
                sig_b.label(i)
            )));
        }
    }
    Ok(())
}

fn within(max: Option<usize>, a: &Diagram, b: &Diagram) -> bool {
    max.is_none_or(|m| a.degree() + b.degree() <= m)
}

/// Disjoint union of diagrams (the product of the B spaces), truncated above `max`.
pub fn disjoint_union_upto(a: &LinComb, b: &LinComb, max: Option<usize>) -> Result<LinComb> {
    let (sig, map) = a.signature().merge(b.signature())?;
    let ident: Vec<usize> = (0..a.signature().len()).collect();
    let shift = vec![0u16; sig.len()];
    let mut out = LinComb::zero(sig);
    for (da, ca) in a.terms() {
        let ga = da.to_graph();
        for (db, cb) in b.terms() {
            if !within(max, da, db) {
                continue;
            }
            skeleton_clash(a.signature(), da, b.signature(), db, &map, None)?;
            let mut g = Graph::new();
            g.append(&ga, &ident, &shift);
            g.append(&db.to_graph(), &map, &shift);
            out.add_graph(&g, ca * cb)?;
        }
    }
    Ok(out)
}

pub fn disjoint_union(a: &LinComb, b: &LinComb) -> Result<LinComb> {
    disjoint_union_upto(a, b, None)
}

/// Stacks `b` after `a` along the interval `label`.
pub fn connected_sum_upto(
    a: &LinComb,
    b: &LinComb,
    label: &str,
    max: Option<usize>,
) -> Result<LinComb> {
    let xa = a.signature().require(label)?;
    let xb = b.signature().require(label)?;
    for s in [a.signature(), b.signature()] {
        if s.kind(s.require(label)?) != ComponentKind::Interval {
            return Err(Error::Domain(format!(
                "connected sum needs {label:?} to be an interval"
            )));
        }
    }
    let (sig, map) = a.signature().merge(b.signature())?;
    let ident: Vec<usize> = (0..a.signature().len()).collect();
    let zero = vec![0u16; sig.len()];
    let mut out = LinComb::zero(sig.clone());
    for (da, ca) in a.terms() {
        let ga = da.to_graph();
        let mut shift = vec![0u16; sig.len()];
        shift[map[xb]] = da.legs_on(xa) as u16;
        for (db, cb) in b.terms() {
            if !within(max, da, db) {
                continue;
            }
            skeleton_clash(a.signature(), da, b.signature(), db, &map, Some(xb))?;
            let mut g = Graph::new();
            g.append(&ga, &ident, &zero);
            g.append(&db.to_graph(), &map, &shift);
            out.add_graph(&g, ca * cb)?;
        }
    }
    Ok(out)
}

pub fn connected_sum(a: &LinComb, b: &LinComb, label: &str) -> Result<LinComb> {
    connected_sum_upto(a, b, label, None)
}

fn skeleton_of(kind: ComponentKind) -> ComponentKind {
    match kind {
        ComponentKind::CircledAsterisk => ComponentKind::Circle,
        _ => ComponentKind::Interval,
    }
}

fn free_of(kind: ComponentKind) -> ComponentKind {
    match kind {
        ComponentKind::Circle => ComponentKind::CircledAsterisk,
        _ => ComponentKind::Asterisk,
    }
}

/// Averages over all orderings of the legs labelled `label`, placing them on an interval
/// (or on a circle, for a circled asterisk).
pub fn chi(v: &LinComb, label: &str) -> Result<LinComb> {
    let sig = v.signature();
    let c = free_comp(sig, label)?;
    let out_sig = sig.with_kind(label, skeleton_of(sig.kind(c)))?;
    let mut out = LinComb::zero(out_sig);
    for (d, coef) in v.terms() {
        let g = d.to_graph();
        let idx: Vec<usize> = (0..g.legs.len())
            .filter(|&i| g.legs[i].1.comp() == c)
            .collect();
        let w = coef / qfact(idx.len());
        let mut err = None;
        for_each_permutation(idx.len(), |p| {
            if err.is_some() {
                return;
            }
            let mut h = g.clone();
            for (i, &li) in idx.iter().enumerate() {
                h.legs[li].1 = Attach::Skeleton {
                    comp: c as u8,
                    pos: p[i] as u16,
                };
            }
            if let Err(e) = out.add_graph(&h, w.clone()) {
                err = Some(e);
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(out)
}

struct ChiTable {
    a: std::sync::Arc<Quotient>,
    b_basis: Vec<Diagram>,
    inverse: Vec<Vec<Q>>,
}

fn chi_table(
    engine: &Engine,
    asig: &Signature,
    label: &str,
    block: &Block,
    filter: Filter,
) -> Result<ChiTable> {
    let c = asig.require(label)?;
    let bsig = asig.with_kind(label, free_of(asig.kind(c)))?;
    let a = engine.quotient(&block_key(asig, block, filter))?;
    let mut b_basis = Vec::new();
    for k in 0..=2 * block.0 {
        let mut legs = block.1.clone();
        legs[c] = k;
        let qb = engine.quotient(&block_key(&bsig, &(block.0, legs), filter))?;
        b_basis.extend(qb.basis().into_iter().cloned());
    }
    let n = a.dim();
    if b_basis.len() != n {
        return Err(Error::Invariant(format!(
            "symmetrization is not square: {} against {} at degree {}",
            b_basis.len(),
            n,
            block.0
        )));
    }
    let mut m = vec![vec![Q::zero(); n]; n];
    for (j, b) in b_basis.iter().enumerate() {
        let img = chi(
            &LinComb::from_diagram(bsig.clone(), b.clone(), Q::one()),
            label,
        )?;
        for (i, x) in a.normal_form(&img)? {
            m[i][j] = x;
        }
    }
    let mut inverse = vec![vec![Q::zero(); n]; n];
    for col in 0..n {
        let mut e = vec![Q::zero(); n];
        e[col] = Q::one();
        let x = solve_dense(&m, &e).ok_or_else(|| {
            Error::Invariant(format!("symmetrization is singular at degree {}", block.0))
        })?;
        for (i, xi) in x.into_iter().enumerate() {
            inverse[i][col] = xi;
        }
    }
    Ok(ChiTable {
        a,
        b_basis,
        inverse,
    })
}

/// Inverse of [`chi`], solved exactly in the quotient. The result is written in basis
/// diagrams of the target space.
pub fn chi_inverse(engine: &Engine, v: &LinComb, label: &str) -> Result<LinComb> {
    let sig = v.signature();
    let c = sig.require(label)?;
    if !sig.kind(c).is_skeleton() {
        return Err(Error::Domain(format!(
            "inverse symmetrization needs {label:?} to be a skeleton component"
        )));
    }
    let bsig = sig.with_kind(label, free_of(sig.kind(c)))?;
    let filter = natural_filter(v);
    let mut out = LinComb::zero(bsig);
    for (block, part) in split_blocks(v) {
        let key = format!("chi-inverse {sig} {label} {block:?} {filter:?}");
        let t = engine.memo(key, || chi_table(engine, sig, label, &block, filter))?;
        let coords = t.a.normal_form(&part)?;
        for (j, b) in t.b_basis.iter().enumerate() {
            let mut y = Q::zero();
            for (i, x) in &coords {
                y += &t.inverse[j][*i] * x;
            }
            out.add_diagram(b.clone(), y);
        }
    }
    Ok(out)
}

fn single_free_component(c: &LinComb) -> Result<()> {
    let s = c.signature();
    if s.len() != 1 || !s.kind(0).is_free() {
        return Err(Error::Domain(format!(
            "the operator must live on a single asterisk component, got [{s}]"
        )));
    }
    Ok(())
}

/// The operator `C` acting on the `label` legs of `d`: all legs of `C` are glued to
/// distinct `label` legs of `d`, summed over the injective assignments.
pub fn apply_diff_op(c: &LinComb, d: &LinComb, label: &str) -> Result<LinComb> {
    apply_diff_op_upto(c, d, label, None)
}

pub fn apply_diff_op_upto(
    c: &LinComb,
    d: &LinComb,
    label: &str,
    max: Option<usize>,
) -> Result<LinComb> {
    single_free_component(c)?;
    let x = free_comp(d.signature(), label)?;
    if c.terms().any(|(t, _)| t.has_strut_between(&[0])) {
        return Err(Error::Domain(
            "differential operators must be strutless".into(),
        ));
    }
    let sig = d.signature().clone();
    let ident: Vec<usize> = (0..sig.len()).collect();
    let zero = vec![0u16; sig.len()];
    let mut out = LinComb::zero(sig.clone());
    for (dd, cd) in d.terms() {
        let gd = dd.to_graph();
        let targets: Vec<usize> = (0..gd.legs.len())
            .filter(|&i| gd.legs[i].1.comp() == x)
            .collect();
        for (dc, cc) in c.terms() {
            let k = dc.leg_count();
            if k > targets.len() {
                continue;
            }
            if let Some(m) = max {
                if dd.degree() + dc.degree() > m + k {
                    continue;
                }
            }
            let mut g = Graph::new();
            g.append(&gd, &ident, &zero);
            let first = g.legs.len();
            g.append(&dc.to_graph(), &[x], &zero);
            let w = cc * cd;
            let mut err = None;
            for_each_injection(k, targets.len(), |inj| {
                if err.is_some() {
                    return;
                }
                let pairs: Vec<(usize, usize)> = inj
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (first + i, targets[j]))
                    .collect();
                let h = g.glue_legs(&pairs);
                if h.loops > 0 {
                    err = Some(Error::Invariant(
                        "gluing a strutless operator closed a loop".into(),
                    ));
                    return;
                }
                if let Err(e) = out.add_graph(&h, w.clone()) {
                    err = Some(e);
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
    }
    Ok(out)
}

/// Glues all legs of `c` to all legs of `d` on each listed label, summed over the
/// bijections. Unlisted components of both survive. Free loops are allowed only when
/// `allow_loops` is set, in which case they are recorded on the diagram.
pub fn glue_all(c: &LinComb, d: &LinComb, labels: &[&str], allow_loops: bool) -> Result<LinComb> {
    let (cs, ds) = (c.signature(), d.signature());
    let mut merged: Vec<Component> = ds.components().to_vec();
    let mut cmap = Vec::with_capacity(cs.len());
    for comp in cs.components() {
        if labels.contains(&comp.label.as_str()) {
            cmap.push(free_comp(ds, &comp.label)?);
            continue;
        }
        match merged.iter().position(|m| m.label == comp.label) {
            Some(i) if merged[i].kind == comp.kind => cmap.push(i),
            Some(_) => {
                return Err(Error::Signature(format!(
                    "label {:?} has two kinds",
                    comp.label
                )))
            }
            None => {
                cmap.push(merged.len());
                merged.push(comp.clone());
            }
        }
    }
    let glued: Vec<usize> = labels
        .iter()
        .map(|l| free_comp(ds, l))
        .collect::<Result<_>>()?;
    for l in labels {
        free_comp(cs, l)?;
    }
    let msig = Signature::new(merged)?;
    let mut final_comps = Vec::new();
    let mut fmap = vec![usize::MAX; msig.len()];
    for (i, comp) in msig.components().iter().enumerate() {
        if !glued.contains(&i) {
            fmap[i] = final_comps.len();
            final_comps.push(comp.clone());
        }
    }
    let fsig = Signature::new(final_comps)?;
    let dmap: Vec<usize> = (0..ds.len()).collect();
    let zero = vec![0u16; msig.len()];
    let fzero = vec![0u16; fsig.len()];
    let mut out = LinComb::zero(fsig);
    for (dd, cd) in d.terms() {
        let gd = dd.to_graph();
        for (dc, cc) in c.terms() {
            let mut g = Graph::new();
            g.append(&gd, &dmap, &zero);
            let first = g.legs.len();
            g.append(&dc.to_graph(), &cmap, &zero);
            let mut groups = Vec::new();
            let mut ok = true;
            for &x in &glued {
                let from_d: Vec<usize> = (0..first).filter(|&i| g.legs[i].1.comp() == x).collect();
                let from_c: Vec<usize> = (first..g.legs.len())
                    .filter(|&i| g.legs[i].1.comp() == x)
                    .collect();
                if from_d.len() != from_c.len() {
                    ok = false;
                    break;
                }
                groups.push((from_c, from_d));
            }
            if !ok {
                continue;
            }
            let w = cc * cd;
            let mut pairs = Vec::new();
            glue_groups(&g, &groups, 0, &mut pairs, &mut |h: Graph| {
                if h.loops > 0 && !allow_loops {
                    return Err(Error::Domain("gluing two struts closes a loop".into()));
                }
                let mut f = Graph::new();
                f.append(&h, &fmap, &fzero);
                out.add_graph(&f, w.clone())
            })?;
        }
    }
    Ok(out)
}

fn glue_groups(
    g: &Graph,
    groups: &[(Vec<usize>, Vec<usize>)],
    i: usize,
    pairs: &mut Vec<(usize, usize)>,
    f: &mut dyn FnMut(Graph) -> Result<()>,
) -> Result<()> {
    if i == groups.len() {
        return f(g.glue_legs(pairs));
    }
    let (from_c, from_d) = &groups[i];
    let mut result = Ok(());
    for_each_permutation(from_c.len(), |p| {
        if result.is_err() {
            return;
        }
        let base = pairs.len();
        for (a, &b) in p.iter().enumerate() {
            pairs.push((from_c[a], from_d[b]));
        }
        result = glue_groups(g, groups, i + 1, pairs, f);
        pairs.truncate(base);
    });
    result
}

/// Pairing of B spaces: all legs on each label glued, summed over bijections.
pub fn inner_product(c: &LinComb, d: &LinComb, labels: &[&str]) -> Result<LinComb> {
    glue_all(c, d, labels, false)
}

/// Relabels each `label` leg by one of `targets`, summing over all choices.
pub fn coproduct_delta(v: &LinComb, label: &str, targets: &[&str]) -> Result<LinComb> {
    let sig = v.signature();
    let c = free_comp(sig, label)?;
    if targets.is_empty() {
        return Err(Error::Domain(
            "coproduct needs at least one target label".into(),
        ));
    }
    let kind = sig.kind(c);
    let mut out_sig = sig.renamed(label, targets[0])?;
    for t in &targets[1..] {
        out_sig = out_sig.push(Component::new(kind, *t))?;
    }
    let n = targets.len();
    let old = sig.len();
    let mut out = LinComb::zero(out_sig);
    for (d, coef) in v.terms() {
        let g = d.to_graph();
        let idx: Vec<usize> = (0..g.legs.len())
            .filter(|&i| g.legs[i].1.comp() == c)
            .collect();
        let mut err = None;
        for_each_assignment(idx.len(), n, |a| {
            if err.is_some() {
                return;
            }
            let mut h = g.clone();
            for (i, &li) in idx.iter().enumerate() {
                let comp = if a[i] == 0 { c } else { old + a[i] - 1 };
                h.legs[li].1 = Attach::Free { comp: comp as u8 };
            }
            if let Err(e) = out.add_graph(&h, coef.clone()) {
                err = Some(e);
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(out)
}

/// Scales each diagram by `n` to the power of its number of `label` legs.
pub fn psi(v: &LinComb, label: &str, n: &Q) -> Result<LinComb> {
    let c = free_comp(v.signature(), label)?;
    Ok(v.map_coeffs(|d, x| x * crate::rational::pow(n, d.legs_on(c))))
}

/// The signature carrying both tensor factors: every label `l` becomes `l.1` and `l.2`.
pub fn tensor_signature(sig: &Signature) -> Result<Signature> {
    let mut comps = Vec::with_capacity(2 * sig.len());
    for suffix in ["1", "2"] {
        for c in sig.components() {
            comps.push(Component::new(c.kind, format!("{}.{suffix}", c.label)));
        }
    }
    Signature::new(comps)
}

/// `a ⊗ b` encoded on the doubled signature.
pub fn tensor(a: &LinComb, b: &LinComb) -> Result<LinComb> {
    if a.signature() != b.signature() {
        return Err(Error::Signature(
            "tensor factors must share a signature".into(),
        ));
    }
    let sig = a.signature();
    let n = sig.len();
    let tsig = tensor_signature(sig)?;
    let left: Vec<usize> = (0..n).collect();
    let right: Vec<usize> = (n..2 * n).collect();
    let zero = vec![0u16; 2 * n];
    let mut out = LinComb::zero(tsig);
    for (da, ca) in a.terms() {
        for (db, cb) in b.terms() {
            let mut g = Graph::new();
            g.append(&da.to_graph(), &left, &zero);
            g.append(&db.to_graph(), &right, &zero);
            out.add_graph(&g, ca * cb)?;
        }
    }
    Ok(out)
}

/// Sum over the ways of distributing connected components between two factors.
pub fn box_coproduct(v: &LinComb) -> Result<LinComb> {
    let sig = v.signature();
    let n = sig.len();
    let tsig = tensor_signature(sig)?;
    let left: Vec<usize> = (0..n).collect();
    let right: Vec<usize> = (n..2 * n).collect();
    let ident: Vec<usize> = (0..2 * n).collect();
    let zero = vec![0u16; 2 * n];
    let mut out = LinComb::zero(tsig);
    for (d, coef) in v.terms() {
        let blocks = d.blocks();
        if blocks.len() > 20 {
            return Err(Error::Domain(
                "too many components for the coproduct".into(),
            ));
        }
        for mask in 0u32..(1 << blocks.len()) {
            let (mut p1, mut p2) = (Vec::new(), Vec::new());
            for (i, b) in blocks.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    p1.push(b.clone());
                } else {
                    p2.push(b.clone());
                }
            }
            let mut g = d.select_blocks(&p1, &left);
            g.append(&d.select_blocks(&p2, &right), &ident, &zero);
            out.add_graph(&g, coef.clone())?;
        }
    }
    Ok(out)
}

/// Kills every diagram with a component that has no legs.
pub fn pi_bc(v: &LinComb) -> LinComb {
    v.filter(|d| !d.has_vacuum_component())
}

fn check_no_constant(x: &LinComb) -> Result<()> {
    if x.terms().any(|(d, _)| d.degree() == 0) {
        return Err(Error::Domain(
            "exponential needs an argument without degree-0 part".into(),
        ));
    }
    Ok(())
}

/// Exponential series under a product, truncated above degree `max`.
pub fn exp_with(
    x: &LinComb,
    max: usize,
    mul: impl Fn(&LinComb, &LinComb, usize) -> Result<LinComb>,
) -> Result<LinComb> {
    check_no_constant(x)?;
    let x = x.truncate(max);
    let mut sum = LinComb::one(x.signature().clone());
    let mut term = sum.clone();
    for k in 1..=max {
        term = mul(&term, &x, max)?.scale(&(Q::one() / Q::from_integer(k.into())));
        if term.is_zero() {
            break;
        }
        sum = sum.plus(&term)?;
    }
    Ok(sum)
}

pub fn exp_union(x: &LinComb, max: usize) -> Result<LinComb> {
    exp_with(x, max, |a, b, m| disjoint_union_upto(a, b, Some(m)))
}

pub fn exp_hash(x: &LinComb, label: &str, max: usize) -> Result<LinComb> {
    exp_with(x, max, |a, b, m| connected_sum_upto(a, b, label, Some(m)))
}

/// Logarithm of `1 + x` under disjoint union, truncated above degree `max`.
pub fn log_union(y: &LinComb, max: usize) -> Result<LinComb> {
    let one = LinComb::one(y.signature().clone());
    if y.coefficient(&Diagram::empty()) != Q::one() {
        return Err(Error::Domain("logarithm needs constant term one".into()));
    }
    let x = y.minus(&one)?.truncate(max);
    let mut sum = LinComb::zero(y.signature().clone());
    let mut pow = one;
    for k in 1..=max {
        pow = disjoint_union_upto(&pow, &x, Some(max))?;
        if pow.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { Q::one() } else { -Q::one() };
        sum = sum.plus(&pow.scale(&(sign / Q::from_integer(k.into()))))?;
    }
    Ok(sum)
}

pub fn power_union(x: &LinComb, k: usize, max: Option<usize>) -> Result<LinComb> {
    let mut p = LinComb::one(x.signature().clone());
    for _ in 0..k {
        p = disjoint_union_upto(&p, x, max)?;
    }
    Ok(p)
}

pub fn power_hash(x: &LinComb, label: &str, k: usize, max: Option<usize>) -> Result<LinComb> {
    let mut p = LinComb::one(x.signature().clone());
    for _ in 0..k {
        p = connected_sum_upto(&p, x, label, max)?;
    }
    Ok(p)
}

/// Renames one component of every diagram.
pub fn relabel(v: &LinComb, from: &str, to: &str) -> Result<LinComb> {
    v.reinterpret(v.signature().renamed(from, to)?)
}

/// Changes the kind of a free component (asterisk and circled asterisk).
pub fn with_kind(v: &LinComb, label: &str, kind: ComponentKind) -> Result<LinComb> {
    v.reinterpret(v.signature().with_kind(label, kind)?)
}

#[cfg(test)]
mod tests;
