//! Outcome of an identity check.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rational::{format_q, Q};
use crate::spaces::{format_monomial, Coords, Poly};

/// One failing case: what was tested and the nonzero coordinates of the difference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub input: String,
    pub difference: BTreeMap<String, String>,
}

impl Violation {
    pub fn from_coords(input: impl Into<String>, coords: &Coords) -> Self {
        let mut difference = BTreeMap::new();
        for ((deg, legs), nf) in coords {
            for (i, x) in nf {
                difference.insert(format!("d{deg}{legs:?}#{i}"), format_q(x));
            }
        }
        Violation {
            input: input.into(),
            difference,
        }
    }

    pub fn from_poly(input: impl Into<String>, poly: &Poly) -> Self {
        let difference = poly
            .iter()
            .map(|(m, x)| (format_monomial(m), format_q(x)))
            .collect();
        Violation {
            input: input.into(),
            difference,
        }
    }

    pub fn from_values(input: impl Into<String>, expected: &Q, got: &Q) -> Self {
        let mut difference = BTreeMap::new();
        difference.insert("expected".into(), format_q(expected));
        difference.insert("got".into(), format_q(got));
        difference.insert("difference".into(), format_q(&(got - expected)));
        Violation {
            input: input.into(),
            difference,
        }
    }

    pub fn note(input: impl Into<String>, what: impl Into<String>) -> Self {
        let mut difference = BTreeMap::new();
        difference.insert("reason".into(), what.into());
        Violation {
            input: input.into(),
            difference,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub max_degree: usize,
    pub holds: bool,
    pub strata: Vec<String>,
    pub cases: usize,
    pub violations: Vec<Violation>,
    pub values: BTreeMap<String, String>,
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>, max_degree: usize) -> Self {
        VerificationReport {
            identity: identity.into(),
            max_degree,
            holds: true,
            strata: Vec::new(),
            cases: 0,
            violations: Vec::new(),
            values: BTreeMap::new(),
            notes: Vec::new(),
            seconds: 0.0,
        }
    }

    pub fn stratum(&mut self, s: impl Into<String>) {
        let s = s.into();
        if !self.strata.contains(&s) {
            self.strata.push(s);
        }
    }

    pub fn value(&mut self, name: impl Into<String>, x: &Q) {
        self.values.insert(name.into(), format_q(x));
    }

    pub fn case(&mut self, v: Option<Violation>) {
        self.cases += 1;
        if let Some(v) = v {
            self.violations.push(v);
        }
    }

    /// Runs the cases in parallel and records the outcomes in input order.
    pub fn run<T: Sync>(
        &mut self,
        cases: &[T],
        check: impl Fn(&T) -> Result<Option<Violation>> + Sync + Send,
    ) -> Result<()> {
        let out: Vec<Option<Violation>> = cases.par_iter().map(check).collect::<Result<_>>()?;
        for v in out {
            self.case(v);
        }
        Ok(())
    }

    pub fn merge(&mut self, part: VerificationReport) {
        for s in part.strata {
            self.stratum(s);
        }
        self.cases += part.cases;
        self.violations.extend(part.violations);
        for (k, v) in part.values {
            self.values.insert(format!("{}.{k}", part.identity), v);
        }
        self.notes.extend(part.notes);
        self.holds &= part.holds;
    }

    /// Seals the report: `holds` is false once any violation was recorded.
    pub fn finish(mut self, start: Instant) -> Self {
        self.holds = self.holds && self.violations.is_empty();
        self.seconds = start.elapsed().as_secs_f64();
        self
    }
}
