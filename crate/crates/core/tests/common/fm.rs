//! Fourier-Motzkin elimination over exact rationals, used as a feasibility
//! oracle for the incremental solver.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use cnd::compile::{LayoutVar, LinConstraint, Relation};
use cnd::error::Provenance;
use cnd::solver::SolverState;

/// `coefs . x + constant <= 0`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ineq {
    pub coefs: Vec<BigRational>,
    pub constant: BigRational,
}

impl Ineq {
    fn normalized(mut self) -> Ineq {
        let scale = self
            .coefs
            .iter()
            .chain(std::iter::once(&self.constant))
            .map(|c| c.abs())
            .filter(|c| !c.is_zero())
            .max();
        if let Some(scale) = scale {
            for c in self.coefs.iter_mut() {
                *c = &*c / &scale;
            }
            self.constant = &self.constant / &scale;
        }
        self
    }
}

pub fn feasible(system: &[Ineq], vars: usize) -> bool {
    let mut rows: BTreeSet<Ineq> = system.iter().cloned().map(Ineq::normalized).collect();
    for k in 0..vars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), BTreeSet::new());
        for r in rows {
            if r.coefs[k].is_positive() {
                pos.push(r);
            } else if r.coefs[k].is_negative() {
                neg.push(r);
            } else {
                rest.insert(r);
            }
        }
        for p in &pos {
            for n in &neg {
                let (a, b) = (p.coefs[k].clone(), -n.coefs[k].clone());
                let coefs = p.coefs.iter().zip(&n.coefs).map(|(x, y)| x * &b + y * &a).collect();
                let constant = &p.constant * &b + &n.constant * &a;
                rest.insert(Ineq { coefs, constant }.normalized());
            }
        }
        rows = rest;
    }
    rows.iter().all(|r| !r.constant.is_positive())
}

/// A random system over at most 6 variables with small integer coefficients.
#[derive(Debug, Clone)]
pub struct System {
    pub vars: usize,
    pub rows: Vec<(Relation, Vec<i64>, i64)>,
}

pub fn random_system(rng: &mut ChaCha8Rng) -> System {
    let vars = rng.gen_range(1..=6);
    let count = rng.gen_range(1..=7);
    let rows = (0..count)
        .map(|_| {
            let mut coefs = vec![0i64; vars];
            for _ in 0..rng.gen_range(1..=3.min(vars)) {
                coefs[rng.gen_range(0..vars)] = rng.gen_range(-3..=3);
            }
            let rel = if rng.gen_bool(0.2) { Relation::Eq } else { Relation::Le };
            (rel, coefs, rng.gen_range(-10..=10))
        })
        .collect();
    System { vars, rows }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Feasibility by elimination.
pub fn oracle(sys: &System) -> bool {
    let mut ineqs = Vec::new();
    for (rel, coefs, c) in &sys.rows {
        let row = Ineq {
            coefs: coefs.iter().map(|&a| int(a)).collect(),
            constant: int(*c),
        };
        if *rel == Relation::Eq {
            ineqs.push(Ineq {
                coefs: row.coefs.iter().map(|a| -a).collect(),
                constant: -&row.constant,
            });
        }
        ineqs.push(row);
    }
    feasible(&ineqs, sys.vars)
}

/// Feasibility by the incremental solver.
pub fn solver(sys: &System) -> bool {
    let cs = sys.rows.iter().enumerate().map(|(i, (rel, coefs, c))| {
        let terms = coefs
            .iter()
            .enumerate()
            .map(|(j, &a)| (LayoutVar::x(&format!("v{j}")), int(a)))
            .collect();
        let prov = Provenance {
            line: i + 1,
            text: format!("row {i}"),
            atoms: vec![],
        };
        LinConstraint::new(*rel, terms, int(*c), prov)
    });
    SolverState::new().add_all(cs).is_ok()
}
