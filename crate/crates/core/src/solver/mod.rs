//! Incremental feasibility checking and solving of layout constraints.
//!
//! Every spec constraint enters as a required constraint, one at a time and
//! in problem order. The first one that cannot be added stops the process
//! with an [`UnsatError`] naming it and everything accepted before it.
//! Seeds become weak stays and user drags strong edits, so neither can
//! override a required constraint.

pub mod simplex;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::compile::{grid_rational, LayoutVar, LinConstraint, Relation};
use crate::error::UnsatError;

use simplex::{Expr, Op, Simplex, SimplexError, Strength};

/// Exact solved values, keyed by layout variable.
pub type Positions = BTreeMap<LayoutVar, BigRational>;

pub fn to_f64(positions: &Positions) -> BTreeMap<LayoutVar, f64> {
    positions
        .iter()
        .map(|(k, v)| (k.clone(), v.to_f64().unwrap_or(f64::NAN)))
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct SolverState {
    simplex: Simplex<LayoutVar>,
    added: Vec<LinConstraint>,
    stays: BTreeSet<LayoutVar>,
    edits: BTreeSet<LayoutVar>,
}

fn expr_of(c: &LinConstraint) -> (Expr<LayoutVar>, Op) {
    let op = match c.relation {
        Relation::Eq => Op::Eq,
        Relation::Le => Op::Le,
    };
    (
        Expr {
            terms: c.terms.clone(),
            constant: c.constant.clone(),
        },
        op,
    )
}

impl SolverState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Constraints accepted so far, in order.
    pub fn added(&self) -> &[LinConstraint] {
        &self.added
    }

    /// Add a required constraint. On failure the state is left exactly as it
    /// was before the call.
    pub fn add_constraint(&mut self, c: LinConstraint) -> Result<(), UnsatError> {
        let (expr, op) = expr_of(&c);
        let snapshot = self.simplex.clone();
        match self.simplex.add_constraint(&expr, op, Strength::Required) {
            Ok(_) => {
                self.added.push(c);
                Ok(())
            }
            Err(SimplexError::Unsatisfiable) => {
                self.simplex = snapshot;
                Err(UnsatError {
                    failing: c.provenance,
                    context: self.added.iter().map(|a| a.provenance.clone()).collect(),
                })
            }
            Err(e) => unreachable!("required add cannot fail with {e:?}"),
        }
    }

    /// Like [`add_constraint`](Self::add_constraint) but for many; stops at
    /// the first failure.
    pub fn add_all<I: IntoIterator<Item = LinConstraint>>(&mut self, cs: I) -> Result<(), UnsatError> {
        for c in cs {
            self.add_constraint(c)?;
        }
        Ok(())
    }

    /// Weakly anchor `var` at `value` (creating the stay on first use).
    pub fn set_stay(&mut self, var: &LayoutVar, value: f64) {
        if self.edits.contains(var) {
            return;
        }
        if self.stays.insert(var.clone()) {
            self.simplex
                .add_edit(var, Strength::Weak)
                .expect("fresh weak edit");
        }
        self.simplex
            .suggest(var, grid_rational(value))
            .expect("stay registered");
    }

    /// Strongly prefer `var == value`; required constraints still win.
    pub fn suggest(&mut self, var: &LayoutVar, value: f64) {
        if !self.edits.contains(var) {
            if self.stays.remove(var) {
                self.simplex.remove_edit(var).expect("stay registered");
            }
            self.simplex
                .add_edit(var, Strength::Strong)
                .expect("fresh strong edit");
            self.edits.insert(var.clone());
        }
        self.simplex
            .suggest(var, grid_rational(value))
            .expect("edit registered");
    }

    pub fn is_edited(&self, var: &LayoutVar) -> bool {
        self.edits.contains(var)
    }

    /// Values for every variable the solver has seen.
    pub fn solve(&self) -> Positions {
        self.simplex
            .variables()
            .map(|v| (v.clone(), self.simplex.value(v)))
            .collect()
    }

    pub fn value(&self, var: &LayoutVar) -> BigRational {
        if self.simplex.variables().any(|v| v == var) {
            self.simplex.value(var)
        } else {
            BigRational::zero()
        }
    }
}
