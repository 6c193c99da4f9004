//! Sparse exact row echelon form over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::{parse_q, Q};

pub type SparseRow = Vec<(usize, Q)>;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(into = "EchelonRepr", try_from = "EchelonRepr")]
pub struct Echelon {
    ncols: usize,
    /// Rows with leading entry one, keyed by pivot column.
    rows: BTreeMap<usize, SparseRow>,
    reduced: bool,
}

#[derive(Serialize, Deserialize)]
struct EchelonRepr {
    ncols: usize,
    rows: Vec<Vec<(usize, String)>>,
}

impl From<Echelon> for EchelonRepr {
    fn from(mut e: Echelon) -> Self {
        e.reduce();
        EchelonRepr {
            ncols: e.ncols,
            rows: e
                .rows
                .into_values()
                .map(|r| r.into_iter().map(|(c, x)| (c, x.to_string())).collect())
                .collect(),
        }
    }
}

impl TryFrom<EchelonRepr> for Echelon {
    type Error = Error;
    fn try_from(r: EchelonRepr) -> Result<Self, Error> {
        let mut rows = BTreeMap::new();
        for row in r.rows {
            let row: SparseRow = row
                .into_iter()
                .map(|(c, x)| parse_q(&x).map(|x| (c, x)))
                .collect::<Result<_, _>>()?;
            let lead = row
                .first()
                .ok_or_else(|| Error::Cache("empty echelon row".into()))?
                .0;
            rows.insert(lead, row);
        }
        Ok(Echelon {
            ncols: r.ncols,
            rows,
            reduced: true,
        })
    }
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: BTreeMap::new(),
            reduced: true,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseRow)> {
        self.rows.iter().map(|(&p, r)| (p, r))
    }

    /// Reduces the row against the current pivots and keeps it if independent.
    pub fn insert(&mut self, row: impl IntoIterator<Item = (usize, Q)>) -> bool {
        let mut w: BTreeMap<usize, Q> = BTreeMap::new();
        for (c, x) in row {
            assert!(c < self.ncols, "column {c} out of range");
            let e = w.entry(c).or_insert_with(Q::zero);
            *e += x;
        }
        w.retain(|_, x| !x.is_zero());
        loop {
            let Some((&lead, _)) = w.iter().next() else {
                return false;
            };
            let Some(prow) = self.rows.get(&lead) else {
                break;
            };
            let f = w[&lead].clone();
            for (c, x) in prow {
                let e = w.entry(*c).or_insert_with(Q::zero);
                *e -= &f * x;
                if e.is_zero() {
                    w.remove(c);
                }
            }
        }
        let lead = *w.keys().next().unwrap();
        let inv = Q::one() / &w[&lead];
        let row: SparseRow = w.into_iter().map(|(c, x)| (c, x * &inv)).collect();
        self.rows.insert(lead, row);
        self.reduced = false;
        true
    }

    /// Back substitution to reduced row echelon form.
    pub fn reduce(&mut self) {
        if self.reduced {
            return;
        }
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for &p in &pivots {
            let prow = self.rows[&p].clone();
            let others: Vec<usize> = self
                .rows
                .range(..p)
                .filter(|(_, r)| r.iter().any(|(c, _)| *c == p))
                .map(|(&k, _)| k)
                .collect();
            for k in others {
                let row = self.rows.get_mut(&k).unwrap();
                let f = row.iter().find(|(c, _)| *c == p).unwrap().1.clone();
                let mut w: BTreeMap<usize, Q> = row.drain(..).collect();
                for (c, x) in &prow {
                    let e = w.entry(*c).or_insert_with(Q::zero);
                    *e -= &f * x;
                }
                w.retain(|_, x| !x.is_zero());
                *row = w.into_iter().collect();
            }
        }
        self.reduced = true;
    }

    /// Remainder of a vector modulo the row space. Requires reduced form; the result
    /// is supported on non-pivot columns.
    pub fn remainder(&self, v: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        assert!(self.reduced, "remainder needs reduced echelon form");
        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        for (c, x) in v {
            match self.rows.get(c) {
                None => {
                    *out.entry(*c).or_insert_with(Q::zero) += x;
                }
                Some(row) => {
                    for (c2, y) in row.iter().skip(1) {
                        *out.entry(*c2).or_insert_with(Q::zero) -= x * y;
                    }
                }
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }
}

/// Solves `m x = b` for a square invertible dense matrix by Gauss-Jordan elimination.
pub fn solve_dense(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(row, y)| {
            let mut r = row.clone();
            r.push(y.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = Q::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Rank of a dense matrix.
pub fn dense_rank(m: &[Vec<Q>]) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut e = Echelon::new(ncols);
    for row in m {
        e.insert(row.iter().enumerate().map(|(c, x)| (c, x.clone())));
    }
    e.rank()
}
