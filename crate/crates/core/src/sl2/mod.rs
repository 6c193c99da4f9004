//! The sl2 weight system as a rewrite engine: every edge between two trivalent vertices
//! is resolved into a smoothing minus a crossing, free circles count 3.
//!
//! Normalization: the invariant form is minus the trace of the product of adjoint
//! matrices, so a circle is 3, the theta graph 6 and the two-spoked wheel twice a strut.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::calculus::{glue_all, inner_product, power_union};
use crate::diagrams::{Attach, Diagram, Graph, Signature};
use crate::error::{Error, Result};
use crate::rational::{format_q, pow, qfact, qi, Q};
use crate::report::{VerificationReport, Violation};
use crate::series::Series;
use crate::spaces::LinComb;
use crate::wheels::{omega_with, strut, theta, wheel, BernoulliTable};

/// Which internal edge is resolved first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Least,
    Greatest,
}

/// Value of a diagram: a combination of strut-only diagrams on the input signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Value {
    pub matchings: LinComb,
}

impl Sl2Value {
    pub fn zero(sig: Signature) -> Self {
        Sl2Value {
            matchings: LinComb::zero(sig),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matchings.is_zero()
    }

    /// The number a closed diagram evaluates to.
    pub fn scalar(&self) -> Result<Q> {
        if self.matchings.terms().any(|(d, _)| d.leg_count() > 0) {
            return Err(Error::Domain("the value still has legs".into()));
        }
        Ok(self.matchings.coefficient(&Diagram::empty()))
    }

    /// Coefficients `c_k` of the k-th strut power, for values on a single label.
    pub fn strut_powers(&self) -> Result<BTreeMap<usize, Q>> {
        if self.matchings.signature().len() > 1 {
            return Err(Error::Domain("strut powers need a single label".into()));
        }
        let mut out = BTreeMap::new();
        for (d, c) in self.matchings.terms() {
            out.insert(d.leg_count() / 2, c.clone());
        }
        Ok(out)
    }
}

#[derive(Clone)]
struct State {
    tri: Vec<Option<[u32; 3]>>,
    mate: Vec<u32>,
    legs: Vec<(u32, Attach)>,
    circles: u32,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Owner {
    Tri(usize, usize),
    Leg,
    Dead,
}

impl State {
    fn from_graph(g: &Graph) -> Self {
        State {
            tri: g.tri.iter().map(|t| Some(*t)).collect(),
            mate: g.mate.clone(),
            legs: g.legs.clone(),
            circles: g.loops,
        }
    }

    fn owners(&self) -> Vec<Owner> {
        let mut own = vec![Owner::Dead; self.mate.len()];
        for (i, t) in self.tri.iter().enumerate() {
            if let Some(t) = t {
                for (k, &d) in t.iter().enumerate() {
                    own[d as usize] = Owner::Tri(i, k);
                }
            }
        }
        for &(d, _) in &self.legs {
            own[d as usize] = Owner::Leg;
        }
        own
    }

    /// Some tri vertex has two of its own darts joined.
    fn has_tadpole(&self, own: &[Owner]) -> bool {
        self.tri.iter().enumerate().any(|(i, t)| {
            t.is_some_and(|t| {
                t.iter().any(
                    |&d| matches!(own[self.mate[d as usize] as usize], Owner::Tri(j, _) if j == i),
                )
            })
        })
    }

    fn internal_edge(&self, own: &[Owner], strategy: Strategy) -> Option<u32> {
        let mut found = None;
        for (i, t) in self.tri.iter().enumerate() {
            let Some(t) = t else { continue };
            for &d in t {
                if let Owner::Tri(j, _) = own[self.mate[d as usize] as usize] {
                    if j != i {
                        let e = d.min(self.mate[d as usize]);
                        found = match (found, strategy) {
                            (None, _) => Some(e),
                            (Some(f), Strategy::Least) => Some(f.min(e)),
                            (Some(f), Strategy::Greatest) => Some(f.max(e)),
                        };
                    }
                }
            }
        }
        found
    }

    /// Removes the two ends of edge `e` and joins their other darts as `pairs` says.
    fn resolve(&self, ports: [u32; 4], pairs: [(usize, usize); 2], u: usize, w: usize) -> State {
        let mut s = self.clone();
        s.tri[u] = None;
        s.tri[w] = None;
        let is_port = |d: u32| ports.contains(&d);
        let partner = |k: usize| -> usize {
            pairs
                .iter()
                .find_map(|&(a, b)| {
                    if a == k {
                        Some(b)
                    } else if b == k {
                        Some(a)
                    } else {
                        None
                    }
                })
                .unwrap()
        };
        let mut seen = [false; 4];
        for start in 0..4 {
            if seen[start] || is_port(self.mate[ports[start] as usize]) {
                continue;
            }
            seen[start] = true;
            let mut q = partner(start);
            seen[q] = true;
            while is_port(self.mate[ports[q] as usize]) {
                let r = ports
                    .iter()
                    .position(|&p| p == self.mate[ports[q] as usize])
                    .unwrap();
                seen[r] = true;
                q = partner(r);
                seen[q] = true;
            }
            let (x, y) = (
                self.mate[ports[start] as usize],
                self.mate[ports[q] as usize],
            );
            s.mate[x as usize] = y;
            s.mate[y as usize] = x;
        }
        while let Some(start) = (0..4).find(|&k| !seen[k]) {
            let mut k = start;
            loop {
                seen[k] = true;
                let q = partner(k);
                seen[q] = true;
                let r = ports
                    .iter()
                    .position(|&p| p == self.mate[ports[q] as usize])
                    .unwrap();
                if seen[r] {
                    break;
                }
                k = r;
            }
            s.circles += 1;
        }
        s
    }
}

fn rotate(t: [u32; 3], d: u32) -> [u32; 3] {
    let k = t.iter().position(|&x| x == d).unwrap();
    [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]
}

fn terminal(s: &State, own: &[Owner], coef: Q, out: &mut LinComb) -> Result<()> {
    let tripods: Vec<[u32; 3]> = s.tri.iter().flatten().copied().collect();
    let attach = |d: u32| {
        s.legs
            .iter()
            .find(|l| l.0 == s.mate[d as usize])
            .map(|l| l.1)
    };
    // two legs of one tripod on the same free label cancel by antisymmetry
    if tripods.iter().any(|t| {
        let a: Vec<_> = t.iter().map(|&d| attach(d)).collect();
        a[0] == a[1] || a[1] == a[2] || a[0] == a[2]
    }) {
        return Ok(());
    }
    if tripods.len() % 2 == 1 {
        return Err(Error::Reduction(
            "an odd number of tripods has no strut expansion".into(),
        ));
    }
    let base = coef * pow(&qi(3), s.circles as usize);
    let mut leg_of = BTreeMap::new();
    for (i, &(d, _)) in s.legs.iter().enumerate() {
        leg_of.insert(d, i);
    }
    let mut fixed = Vec::new();
    for (i, &(d, _)) in s.legs.iter().enumerate() {
        let m = s.mate[d as usize];
        if own[m as usize] == Owner::Leg && d < m {
            fixed.push((i, leg_of[&m]));
        }
    }
    let mut partial: Vec<(Vec<(usize, usize)>, Q)> = vec![(fixed, base)];
    for pair in tripods.chunks(2) {
        let a: Vec<usize> = pair[0]
            .iter()
            .map(|&d| leg_of[&s.mate[d as usize]])
            .collect();
        let b: Vec<usize> = pair[1]
            .iter()
            .map(|&d| leg_of[&s.mate[d as usize]])
            .collect();
        let mut next = Vec::new();
        crate::calculus::for_each_permutation(3, |p| {
            let sign = if inversions(p).is_multiple_of(2) {
                -Q::one()
            } else {
                Q::one()
            };
            for (m, c) in &partial {
                let mut m = m.clone();
                for k in 0..3 {
                    m.push((a[k], b[p[k]]));
                }
                next.push((m, c * &sign));
            }
        });
        partial = next;
    }
    for (m, c) in partial {
        let mut g = Graph::new();
        for (i, j) in m {
            let (x, y) = g.edge();
            g.add_leg(x, s.legs[i].1);
            g.add_leg(y, s.legs[j].1);
        }
        out.add_graph(&g, c)?;
    }
    Ok(())
}

fn inversions(p: &[usize]) -> usize {
    let mut n = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                n += 1;
            }
        }
    }
    n
}

fn reduce_graph(g: &Graph, coef: Q, strategy: Strategy, out: &mut LinComb) -> Result<()> {
    let mut work = vec![(State::from_graph(g), coef)];
    while let Some((s, c)) = work.pop() {
        let own = s.owners();
        if s.has_tadpole(&own) {
            continue;
        }
        let Some(e) = s.internal_edge(&own, strategy) else {
            terminal(&s, &own, c, out)?;
            continue;
        };
        let f = s.mate[e as usize];
        let (Owner::Tri(u, _), Owner::Tri(w, _)) = (own[e as usize], own[f as usize]) else {
            return Err(Error::Invariant(
                "internal edge without trivalent ends".into(),
            ));
        };
        let tu = rotate(s.tri[u].unwrap(), e);
        let tw = rotate(s.tri[w].unwrap(), f);
        let ports = [tu[1], tu[2], tw[1], tw[2]];
        work.push((s.resolve(ports, [(0, 3), (1, 2)], u, w), c.clone()));
        work.push((s.resolve(ports, [(0, 2), (1, 3)], u, w), -c));
    }
    Ok(())
}

/// Evaluates every term of `v` in the sl2 weight system.
pub fn sl2_reduce_with(v: &LinComb, strategy: Strategy) -> Result<Sl2Value> {
    let sig = v.signature();
    if sig.components().iter().any(|c| c.kind.is_skeleton()) {
        return Err(Error::Domain(format!(
            "the sl2 rewrite needs a diagram without skeleton, got [{sig}]"
        )));
    }
    let terms: Vec<(&Diagram, &Q)> = v.terms().collect();
    let parts: Vec<LinComb> = terms
        .par_iter()
        .map(|(d, c)| {
            let mut out = LinComb::zero(sig.clone());
            reduce_graph(&d.to_graph(), (*c).clone(), strategy, &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut total = LinComb::zero(sig.clone());
    for p in parts {
        total.add_scaled(&p, &Q::one())?;
    }
    Ok(Sl2Value { matchings: total })
}

pub fn sl2_reduce(v: &LinComb) -> Result<Sl2Value> {
    sl2_reduce_with(v, Strategy::default())
}

/// The k-th power of the strut on one label.
pub fn strut_power(label: &str, k: usize) -> Result<LinComb> {
    power_union(&strut(label, label)?, k, None)
}

/// `ω_2n ≡ 2 (strut)^n` for `n <= n_max`.
pub fn verify_sl2_wheel(n_max: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("sl2-wheel", 2 * n_max);
    for n in 1..=n_max {
        let got = sl2_reduce(&wheel(2 * n, "x")?)?;
        let want = strut_power("x", n)?.scale(&qi(2));
        r.case((got.matchings != want).then(|| {
            Violation::note(
                format!("wheel with {} spokes", 2 * n),
                format!("reduces to {}", got.matchings),
            )
        }));
        r.value(
            format!("w{}", 2 * n),
            &got.strut_powers()?.get(&n).cloned().unwrap_or_else(Q::zero),
        );
    }
    Ok(r.finish(start))
}

/// `⟨s^n, s^n⟩` under sl2, which must be `(2n+1)!`.
pub fn strut_pairing(n: usize) -> Result<Q> {
    let s = strut_power("x", n)?;
    sl2_reduce(&glue_all(&s, &s, &["x"], true)?)?.scalar()
}

pub fn verify_sl2_gluing(n_max: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("sl2-gluing", 2 * n_max);
    for n in 0..=n_max {
        let got = strut_pairing(n)?;
        let want = qfact(2 * n + 1);
        r.case((got != want).then(|| Violation::from_values(format!("n = {n}"), &want, &got)));
        r.value(format!("n{n}"), &got);
    }
    Ok(r.finish(start))
}

pub fn theta_value() -> Result<Q> {
    sl2_reduce(&theta()?)?.scalar()
}

/// Sawon's identity `⟨Ω, s^n⟩ = (Θ/24)^n` under sl2, for `n <= n_max`.
pub fn verify_sawon(n_max: usize, table: &BernoulliTable) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("sawon", 2 * n_max);
    let omega = omega_with(table, 2 * n_max, "x")?;
    let t = theta_value()? / qi(24);
    r.value("theta", &theta_value()?);
    let ns: Vec<usize> = (0..=n_max).collect();
    let got: Vec<Q> = ns
        .par_iter()
        .map(|&n| {
            let w = omega.lincomb.filter(|d| d.leg_count() == 2 * n);
            sl2_reduce(&inner_product(&w, &strut_power("x", n)?, &["x"])?)?.scalar()
        })
        .collect::<Result<_>>()?;
    for (n, g) in got.iter().enumerate() {
        let want = pow(&t, n);
        r.case((*g != want).then(|| Violation::from_values(format!("n = {n}"), &want, g)));
        r.value(format!("n{n}"), g);
    }
    Ok(r.finish(start))
}

/// Coefficients `a_2n` of `Ω' = exp(∑ a_2n ω_2n)` forced by Sawon's identity, for
/// `2n <= max`, from sl2 values computed by the engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficients {
    pub a: BTreeMap<usize, Q>,
    pub f: BTreeMap<usize, Q>,
}

pub fn solve_coefficients(max: usize) -> Result<Coefficients> {
    let n_max = max / 2;
    let t = theta_value()? / qi(24);
    let mut wheel_factor = vec![Q::zero(); n_max + 1];
    let mut target = vec![Q::zero(); n_max + 1];
    for n in 1..=n_max {
        let v = sl2_reduce(&wheel(2 * n, "x")?)?.strut_powers()?;
        if v.keys().any(|&k| k != n) {
            return Err(Error::Reduction(format!(
                "wheel {} is not a multiple of the strut power",
                2 * n
            )));
        }
        wheel_factor[n] = v.get(&n).cloned().unwrap_or_else(Q::zero);
        target[n] = pow(&t, n) / strut_pairing(n)?;
    }
    let mut a = BTreeMap::new();
    let mut f = BTreeMap::new();
    let mut log = vec![Q::zero(); n_max + 1];
    for n in 1..=n_max {
        if wheel_factor[n].is_zero() {
            return Err(Error::Reduction(format!(
                "the wheel with {} spokes vanishes under sl2",
                2 * n
            )));
        }
        let known = Series::new(log.clone(), n_max).exp()?.coeff(n);
        let x = (&target[n] - known) / &wheel_factor[n];
        log[n] = &wheel_factor[n] * &x;
        a.insert(2 * n, x);
        f.insert(n, target[n].clone());
    }
    Ok(Coefficients { a, f })
}

/// Solved coefficients against a table of `b_2n`.
pub fn verify_coefficients(max: usize, table: &BernoulliTable) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("coefficients", max);
    let solved = solve_coefficients(max)?;
    for (&i, x) in &solved.a {
        let want = table.get(i);
        r.case((*x != want).then(|| Violation::from_values(format!("a{i}"), &want, x)));
        r.values.insert(format!("a{i}"), format_q(x));
    }
    for (&n, x) in &solved.f {
        r.values.insert(format!("f{n}"), format_q(x));
    }
    Ok(r.finish(start))
}

#[cfg(test)]
mod tests;
