//! Degree-by-degree checks of the identities satisfied by Ω and Υ.

use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{chord, omega_op, omega_with, strut, upsilon, BernoulliTable, OmegaElement};
use crate::calculus::{
    apply_diff_op, chi, chi_inverse, connected_sum, connected_sum_upto, coproduct_delta,
    disjoint_union, disjoint_union_upto, exp_hash, exp_union, inner_product, pi_bc, psi, relabel,
    with_kind,
};
use crate::diagrams::{write_graph, ComponentKind, Diagram, Signature};
use crate::error::Result;
use crate::rational::{q, qi, Q};
use crate::report::{VerificationReport, Violation};
use crate::spaces::{
    connected_normal_form, natural_filter, normal_form, quotient_basis, reduce, Engine, Filter,
    LinComb,
};

/// A basis element of a stratum together with a printable description.
#[derive(Clone, Debug)]
pub struct BasisElement {
    pub name: String,
    pub degree: usize,
    pub element: LinComb,
}

impl BasisElement {
    fn strutless(&self) -> bool {
        let free: Vec<usize> = (0..self.element.signature().len()).collect();
        self.element
            .terms()
            .all(|(d, _)| !d.has_strut_between(&free))
    }
}

pub fn describe(sig: &Signature, d: &Diagram) -> String {
    write_graph(&d.to_graph(), sig, 1)
}

/// Every basis element of the strata of degree `0..=max`.
pub fn basis_elements(
    engine: &Engine,
    sig: &Signature,
    max: usize,
    filter: Filter,
) -> Result<Vec<BasisElement>> {
    let mut out = Vec::new();
    for degree in 0..=max {
        let q = quotient_basis(engine, sig, degree, filter)?;
        for d in q.basis() {
            out.push(BasisElement {
                name: describe(sig, d),
                degree,
                element: LinComb::from_diagram(sig.clone(), d.clone(), Q::one()),
            });
        }
    }
    Ok(out)
}

/// Compares two combinations in their natural quotient.
pub fn compare(
    engine: &Engine,
    input: impl FnOnce() -> String,
    lhs: &LinComb,
    rhs: &LinComb,
) -> Result<Option<Violation>> {
    let diff = lhs.minus(rhs)?;
    let nf = normal_form(engine, &diff, natural_filter(&diff))?;
    Ok((!nf.is_empty()).then(|| Violation::from_coords(input(), &nf)))
}

/// Compares two combinations over asterisks through their connected normal forms.
pub fn compare_connected(
    engine: &Engine,
    input: impl FnOnce() -> String,
    lhs: &LinComb,
    rhs: &LinComb,
) -> Result<Option<Violation>> {
    let poly = connected_normal_form(engine, &lhs.minus(rhs)?)?;
    Ok((!poly.is_empty()).then(|| Violation::from_poly(input(), &poly)))
}

fn table_for(table: &BernoulliTable, max: usize, label: &str) -> Result<OmegaElement> {
    omega_with(table, max, label)
}

fn x_sig() -> Signature {
    Signature::asterisk("x")
}

/// `Υ(D₁ ∪ D₂) = Υ(D₁) # Υ(D₂)` on all basis pairs of total degree at most `max`.
pub fn verify_wheeling(
    engine: &Engine,
    max: usize,
    table: &BernoulliTable,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("wheeling", max);
    let omega = table_for(table, 2 * max, "x")?;
    let basis = basis_elements(engine, &x_sig(), max, Filter::All)?;
    let images: Vec<LinComb> = basis
        .par_iter()
        .map(|b| {
            let u = upsilon(&b.element, &omega, "x")?;
            reduce(engine, &u, natural_filter(&u))
        })
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            if basis[i].degree + basis[j].degree <= max {
                pairs.push((i, j));
            }
        }
    }
    r.run(&pairs, |&(i, j)| {
        let lhs = upsilon(
            &disjoint_union(&basis[i].element, &basis[j].element)?,
            &omega,
            "x",
        )?;
        let rhs = connected_sum(&images[i], &images[j], "x")?;
        compare(
            engine,
            || format!("D1 = {}; D2 = {}", basis[i].name, basis[j].name),
            &lhs,
            &rhs,
        )
    })?;
    r.stratum(format!("B(*x) degrees 0..={max}"));
    r.stratum(format!("A(up:x) degrees 0..={max}"));
    Ok(r.finish(start))
}

/// The composition law for differential operators and both duality lemmas.
pub fn verify_composition_duality(engine: &Engine, max: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("composition-duality", max);
    let basis = basis_elements(engine, &x_sig(), max, Filter::All)?;
    let ops: Vec<&BasisElement> = basis.iter().filter(|b| b.strutless()).collect();
    let mut composition = Vec::new();
    let mut first = Vec::new();
    let mut second = Vec::new();
    for a in &ops {
        for b in &ops {
            for d in &basis {
                if a.degree + b.degree + d.degree <= max {
                    composition.push((*a, *b, d));
                    second.push((*a, *b, d));
                }
            }
        }
        for d1 in &basis {
            for d2 in &basis {
                if a.degree + d1.degree + d2.degree <= max {
                    first.push((*a, d1, d2));
                }
            }
        }
    }
    r.run(&composition, |&(c1, c2, d)| {
        let lhs = apply_diff_op(&disjoint_union(&c1.element, &c2.element)?, &d.element, "x")?;
        let rhs = apply_diff_op(
            &c1.element,
            &apply_diff_op(&c2.element, &d.element, "x")?,
            "x",
        )?;
        compare(
            engine,
            || {
                format!(
                    "composition: C1 = {}; C2 = {}; D = {}",
                    c1.name, c2.name, d.name
                )
            },
            &lhs,
            &rhs,
        )
    })?;
    r.run(&first, |&(c, d1, d2)| {
        let lhs = inner_product(
            &c.element,
            &disjoint_union(&d1.element, &d2.element)?,
            &["x"],
        )?;
        let dc = coproduct_delta(&c.element, "x", &["x", "y"])?;
        let split = disjoint_union(&d1.element, &relabel(&d2.element, "x", "y")?)?;
        let rhs = inner_product(&dc, &split, &["x", "y"])?;
        compare(
            engine,
            || {
                format!(
                    "first duality: C = {}; D1 = {}; D2 = {}",
                    c.name, d1.name, d2.name
                )
            },
            &lhs,
            &rhs,
        )
    })?;
    r.run(&second, |&(a, b, c)| {
        let lhs = inner_product(&disjoint_union(&a.element, &b.element)?, &c.element, &["x"])?;
        let rhs = inner_product(
            &a.element,
            &apply_diff_op(&b.element, &c.element, "x")?,
            &["x"],
        )?;
        compare(
            engine,
            || {
                format!(
                    "second duality: A = {}; B = {}; C = {}",
                    a.name, b.name, c.name
                )
            },
            &lhs,
            &rhs,
        )
    })?;
    r.stratum(format!("B(*x) degrees 0..={max}"));
    r.stratum(format!("B(*x,*y) degrees 0..={max}"));
    r.stratum(format!("B() degrees 0..={max}"));
    Ok(r.finish(start))
}

/// `ΔΩ = Ω ⊗ Ω` modulo link relations, and its failure without them.
pub fn verify_delta_omega(
    engine: &Engine,
    max: usize,
    table: &BernoulliTable,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("delta-omega", max);
    let omega = table_for(table, max, "x")?;
    let w = omega.on("x", ComponentKind::CircledAsterisk)?;
    let lhs = coproduct_delta(&w, "x", &["x1", "x2"])?;
    let rhs = disjoint_union(
        &omega.on("x1", ComponentKind::CircledAsterisk)?,
        &omega.on("x2", ComponentKind::CircledAsterisk)?,
    )?;
    let diff = lhs.minus(&rhs)?;
    let plain = diff.reinterpret("*x1,*x2".parse()?)?;
    let degrees: Vec<usize> = (0..=max).collect();
    let outcomes: Vec<(Option<Violation>, bool)> = degrees
        .par_iter()
        .map(|&n| {
            let part = diff.degree_part(n);
            let nf = normal_form(engine, &part, Filter::BoundaryConnected)?;
            let v = (!nf.is_empty())
                .then(|| Violation::from_coords(format!("degree {n} modulo link relations"), &nf));
            let raw = normal_form(engine, &plain.degree_part(n), Filter::BoundaryConnected)?;
            Ok((v, !raw.is_empty()))
        })
        .collect::<Result<_>>()?;
    let mut nonzero = Vec::new();
    for (n, (v, raw)) in outcomes.into_iter().enumerate() {
        r.case(v);
        if raw {
            nonzero.push(n.to_string());
        }
    }
    if nonzero.is_empty() {
        r.case(Some(Violation::note(
            "difference without link relations",
            format!("vanishes at every degree up to {max}"),
        )));
    } else {
        r.case(None);
    }
    r.values
        .insert("unquotiented_nonzero_degrees".into(), nonzero.join(","));
    r.stratum(format!("B(@x1,@x2) degrees 0..={max}"));
    r.stratum(format!("B(*x1,*x2) degrees 0..={max}"));
    Ok(r.finish(start))
}

fn pseudo_case(
    engine: &Engine,
    d: &LinComb,
    omega: &OmegaElement,
    name: &str,
) -> Result<Vec<Option<Violation>>> {
    let max = omega.max_degree;
    let bound = d
        .terms()
        .map(|(t, _)| max as i64 + t.degree() as i64 - t.leg_count() as i64)
        .min()
        .unwrap_or(max as i64)
        .min(max as i64);
    if bound < 0 {
        return Ok(vec![None, None]);
    }
    let bound = bound as usize;
    let w = &omega.lincomb;
    let lhs = apply_diff_op(d, w, "x")?.truncate(bound);
    let pairing = inner_product(d, w, &["x"])?;
    let rhs = disjoint_union_upto(&pairing, w, Some(bound))?;
    let main = compare_connected(
        engine,
        || format!("D = {name}, degrees <= {bound}"),
        &lhs,
        &rhs,
    )?;
    let expected = w.truncate(bound).scale(&d.coefficient(&Diagram::empty()));
    let projected = compare_connected(
        engine,
        || format!("projection: D = {name}, degrees <= {bound}"),
        &pi_bc(&lhs),
        &expected,
    )?;
    Ok(vec![main, projected])
}

/// `∂_D(Ω) = ⟨D, Ω⟩ Ω` and its boundary-connected projection for one strutless `d`.
pub fn verify_pseudo_linearity(
    engine: &Engine,
    d: &LinComb,
    max: usize,
    table: &BernoulliTable,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("pseudo-linear", max);
    let omega = table_for(table, max, "x")?;
    for v in pseudo_case(engine, d, &omega, &d.to_string())? {
        r.case(v);
    }
    r.stratum(format!("connected B(*x) degrees 0..={max}"));
    Ok(r.finish(start))
}

/// Pseudo-linearity for every strutless basis element of degree at most `d_max`.
pub fn verify_pseudo_linearity_all(
    engine: &Engine,
    d_max: usize,
    max: usize,
    table: &BernoulliTable,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("pseudo-linear", max);
    let omega = table_for(table, max, "x")?;
    let basis = basis_elements(engine, &x_sig(), d_max, Filter::All)?;
    let ops: Vec<&BasisElement> = basis.iter().filter(|b| b.strutless()).collect();
    let out: Vec<Vec<Option<Violation>>> = ops
        .par_iter()
        .map(|b| pseudo_case(engine, &b.element, &omega, &b.name))
        .collect::<Result<_>>()?;
    for v in out.into_iter().flatten() {
        r.case(v);
    }
    r.stratum(format!("B(*x) degrees 0..={d_max}"));
    r.stratum(format!("connected B(*x) degrees 0..={max}"));
    Ok(r.finish(start))
}

/// The values of `n` checked by default, or all of `1..=2N+1`.
pub fn coiling_values(max: usize, complete: bool) -> Vec<i64> {
    if complete {
        (1..=2 * max as i64 + 1).collect()
    } else {
        vec![1, 2, 3]
    }
}

/// `ψ⁽ⁿ⁾(Ω # exp_#(strut/2n)) = Ω # exp_#(n strut/2)` modulo link relations.
pub fn verify_coiling(
    engine: &Engine,
    ns: &[i64],
    max: usize,
    table: &BernoulliTable,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("coiling", max);
    let omega = table_for(table, max, "x")?;
    let nu = chi(&omega.lincomb, "x")?;
    let c = chord("x")?;
    let cases: Vec<(i64, usize)> = ns
        .iter()
        .flat_map(|&n| (0..=max).map(move |d| (n, d)))
        .collect();
    let sides: Vec<(i64, LinComb)> = ns
        .par_iter()
        .map(|&n| {
            let n_q = qi(n);
            let small = exp_hash(&c.scale(&q(1, 2 * n)), "x", max)?;
            let large = exp_hash(&c.scale(&q(n, 2)), "x", max)?;
            let left = chi_inverse(
                engine,
                &connected_sum_upto(&nu, &small, "x", Some(max))?,
                "x",
            )?;
            let right = chi_inverse(
                engine,
                &connected_sum_upto(&nu, &large, "x", Some(max))?,
                "x",
            )?;
            let left = psi(
                &with_kind(&left, "x", ComponentKind::CircledAsterisk)?,
                "x",
                &n_q,
            )?;
            let right = with_kind(&right, "x", ComponentKind::CircledAsterisk)?;
            Ok((n, left.minus(&right)?))
        })
        .collect::<Result<_>>()?;
    r.run(&cases, |&(n, d)| {
        let diff = &sides
            .iter()
            .find(|(m, _)| *m == n)
            .expect("every n has a difference")
            .1;
        let part = diff.degree_part(d);
        let nf = normal_form(engine, &part, natural_filter(&part))?;
        Ok((!nf.is_empty()).then(|| Violation::from_coords(format!("n = {n}, degree {d}"), &nf)))
    })?;
    r.values.insert(
        "n".into(),
        ns.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
    );
    r.stratum(format!("B(@x) degrees 0..={max}"));
    r.stratum(format!("A(up:x) degrees 0..={max}"));
    Ok(r.finish(start))
}

fn compare_by_degree(
    engine: &Engine,
    r: &mut VerificationReport,
    what: &str,
    lhs: &LinComb,
    rhs: &LinComb,
    max: usize,
) -> Result<()> {
    let degrees: Vec<usize> = (0..=max).collect();
    r.run(&degrees, |&n| {
        compare(
            engine,
            || format!("{what}, degree {n}"),
            &lhs.degree_part(n),
            &rhs.degree_part(n),
        )
    })
}

/// Three faces of the framed unknot and Hopf link, all after π^bc:
/// `∂_Ω exp(s/2) = Ω ∪ exp(s/2)`, `χ⁻¹ exp_#(c/2) = Ω ∪ exp(s/2)` on a circled label,
/// and the two-label Hopf link computed with one and with two wheeling maps.
pub fn verify_hopf(
    engine: &Engine,
    max: usize,
    table: &BernoulliTable,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("hopf", max);
    let omega = table_for(table, 2 * max, "x")?;
    let w = omega.lincomb.truncate(max);
    let half = strut("x", "x")?.scale(&q(1, 2));
    let e = exp_union(&half, max)?;
    let target = disjoint_union_upto(&w, &e, Some(max))?;

    let guess = pi_bc(&omega_op(&e, &omega, "x")?);
    compare_by_degree(engine, &mut r, "Ω acting on exp(s/2)", &guess, &target, max)?;

    let framed = exp_hash(&chord("x")?.scale(&q(1, 2)), "x", max)?;
    let unknot = pi_bc(&chi_inverse(engine, &framed, "x")?);
    let circled = |v: &LinComb| with_kind(v, "x", ComponentKind::CircledAsterisk);
    compare_by_degree(
        engine,
        &mut r,
        "framed unknot",
        &circled(&unknot)?,
        &circled(&target)?,
        max,
    )?;

    let s = exp_union(&strut("y", "x")?, max)?;
    let wx = omega.on("x", ComponentKind::Asterisk)?;
    let wy = omega.on("y", ComponentKind::Asterisk)?;
    let bead = |v: &LinComb| -> Result<LinComb> {
        Ok(pi_bc(&with_kind(v, "y", ComponentKind::CircledAsterisk)?))
    };
    let second = bead(&upsilon(
        &disjoint_union_upto(&s, &wx, Some(max))?,
        &omega,
        "x",
    )?)?;
    let inner = chi_inverse(engine, &upsilon(&s, &omega, "y")?, "y")?;
    let first = bead(&upsilon(&inner, &omega, "x")?)?;
    compare_by_degree(
        engine,
        &mut r,
        "hopf link, two wheeling maps against one",
        &first,
        &second,
        max,
    )?;

    let open = chi(&disjoint_union_upto(&s, &wy, Some(max))?, "x")?;
    let closed = bead(&connected_sum_upto(&open, &chi(&w, "x")?, "x", Some(max))?)?;
    compare_by_degree(
        engine,
        &mut r,
        "hopf link from the open hopf link",
        &closed,
        &second,
        max,
    )?;

    r.stratum(format!("B(*x) degrees 0..={max}"));
    r.stratum(format!("B(@x) degrees 0..={max}"));
    r.stratum(format!("A(@y,up:x) degrees 0..={max}"));
    Ok(r.finish(start))
}

/// `Δ Ĉ(D) = Ĉ_x(Δ D) = Ĉ_y(Δ D)` for strutless `C`.
pub fn verify_double_diffop(engine: &Engine, max: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("double-diffop", max);
    let basis = basis_elements(engine, &x_sig(), max, Filter::All)?;
    let mut cases = Vec::new();
    for c in basis.iter().filter(|b| b.strutless()) {
        for d in &basis {
            if c.degree + d.degree <= max {
                for side in ["x", "y"] {
                    cases.push((c, d, side));
                }
            }
        }
    }
    r.run(&cases, |&(c, d, side)| {
        let lhs = coproduct_delta(
            &apply_diff_op(&c.element, &d.element, "x")?,
            "x",
            &["x", "y"],
        )?;
        let split = coproduct_delta(&d.element, "x", &["x", "y"])?;
        let op = relabel(&c.element, "x", side)?;
        let rhs = apply_diff_op(&op, &split, side)?;
        compare(
            engine,
            || format!("C = {}; D = {}; acting on {side}", c.name, d.name),
            &lhs,
            &rhs,
        )
    })?;
    r.stratum(format!("B(*x,*y) degrees 0..={max}"));
    Ok(r.finish(start))
}

fn multisets(
    sizes: &[usize],
    k: usize,
    max: usize,
    from: usize,
    acc: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if acc.len() == k {
        out.push(acc.clone());
        return;
    }
    let used: usize = acc.iter().map(|&i| sizes[i]).sum();
    for i in from..sizes.len() {
        if used + sizes[i] <= max {
            acc.push(i);
            multisets(sizes, k, max, i, acc, out);
            acc.pop();
        }
    }
}

/// `χ⁻¹(x₁ # ⋯ # x_k)` has at least `k` legs.
pub fn verify_wheels_lemma(engine: &Engine, k: usize, max: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("wheels-lemma", max);
    let sig = Signature::interval("x");
    let basis: Vec<BasisElement> = basis_elements(engine, &sig, max, Filter::BoundaryConnected)?
        .into_iter()
        .filter(|b| b.degree > 0)
        .collect();
    let sizes: Vec<usize> = basis.iter().map(|b| b.degree).collect();
    let mut tuples = Vec::new();
    multisets(&sizes, k, max, 0, &mut Vec::new(), &mut tuples);
    r.run(&tuples, |t| {
        let mut prod = LinComb::one(sig.clone());
        for &i in t {
            prod = connected_sum(&prod, &basis[i].element, "x")?;
        }
        let b = chi_inverse(engine, &prod, "x")?;
        let short: Vec<String> = b
            .terms()
            .filter(|(d, c)| d.leg_count() < k && !c.is_zero())
            .map(|(d, c)| format!("{c} * {}", describe(b.signature(), d)))
            .collect();
        Ok((!short.is_empty()).then(|| {
            let names: Vec<&str> = t.iter().map(|&i| basis[i].name.as_str()).collect();
            Violation::note(
                names.join(" # "),
                format!("terms with fewer than {k} legs: {}", short.join("; ")),
            )
        }))
    })?;
    r.values.insert("k".into(), k.to_string());
    r.stratum(format!("A(up:x) degrees 1..={max}"));
    r.stratum(format!("B(*x) degrees 1..={max}"));
    Ok(r.finish(start))
}
