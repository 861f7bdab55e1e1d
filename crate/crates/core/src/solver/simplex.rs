//! Incremental Cassowary simplex over exact rationals.
//!
//! The tableau follows the usual Cassowary formulation: every constraint
//! becomes a row `0 = constant + sum(coef * symbol)`; required constraints
//! carry slack or dummy markers, non-required ones carry error symbols that
//! are penalised in the objective by their strength. Basic rows are stored
//! solved for their basic symbol. Edits (stays and drags) are non-required
//! equalities whose constant is updated in place and repaired with the dual
//! simplex.
//!
//! All maps are ordered by symbol id, which gives Bland's rule on entering and
//! leaving ties and makes every pivot sequence reproducible.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Num = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum SymbolKind {
    External,
    Slack,
    Error,
    Dummy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Symbol {
    id: u64,
    kind: SymbolKind,
}

impl Symbol {
    fn is_pivotable(self) -> bool {
        matches!(self.kind, SymbolKind::Slack | SymbolKind::Error)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Strength {
    Weak,
    Medium,
    Strong,
    Required,
}

impl Strength {
    fn weight(self) -> Num {
        let w: i64 = match self {
            Strength::Weak => 1,
            Strength::Medium => 1_000,
            Strength::Strong => 1_000_000,
            Strength::Required => 1_000_000_000,
        };
        Num::from_integer(w.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Default)]
struct Row {
    constant: Num,
    cells: BTreeMap<Symbol, Num>,
}

impl Row {
    fn new(constant: Num) -> Row {
        Row {
            constant,
            cells: BTreeMap::new(),
        }
    }

    fn add(&mut self, value: &Num) -> &Num {
        self.constant += value;
        &self.constant
    }

    fn insert_symbol(&mut self, s: Symbol, coef: &Num) {
        let entry = self.cells.entry(s).or_insert_with(Num::zero);
        *entry += coef;
        if entry.is_zero() {
            self.cells.remove(&s);
        }
    }

    fn insert_row(&mut self, other: &Row, coef: &Num) {
        self.constant += &other.constant * coef;
        for (s, c) in &other.cells {
            self.insert_symbol(*s, &(c * coef));
        }
    }

    fn remove(&mut self, s: Symbol) {
        self.cells.remove(&s);
    }

    fn reverse_sign(&mut self) {
        self.constant = -&self.constant;
        for c in self.cells.values_mut() {
            *c = -&*c;
        }
    }

    /// Rewrite `0 = ... + c*s + ...` as `s = ...`.
    fn solve_for(&mut self, s: Symbol) {
        let c = self.cells.remove(&s).expect("symbol in row");
        let factor = -Num::one() / c;
        self.constant *= &factor;
        for v in self.cells.values_mut() {
            *v *= &factor;
        }
    }

    /// Rewrite `lhs = ... + c*rhs + ...` as `rhs = ...`.
    fn solve_for_pair(&mut self, lhs: Symbol, rhs: Symbol) {
        self.insert_symbol(lhs, &-Num::one());
        self.solve_for(rhs);
    }

    fn coefficient(&self, s: Symbol) -> Num {
        self.cells.get(&s).cloned().unwrap_or_else(Num::zero)
    }

    fn substitute(&mut self, s: Symbol, row: &Row) {
        if let Some(c) = self.cells.remove(&s) {
            self.insert_row(row, &c);
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Tag {
    marker: Symbol,
    other: Option<Symbol>,
}

#[derive(Debug, Clone)]
struct ConstraintRecord {
    tag: Tag,
    strength: Strength,
}

#[derive(Debug, Clone)]
struct EditInfo {
    constraint: ConstraintId,
    tag: Tag,
    constant: Num,
}

/// Handle to a constraint held by a [`Simplex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintId(u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplexError {
    /// A required constraint contradicts the required constraints already held.
    Unsatisfiable,
    UnknownConstraint,
    UnknownEdit,
    DuplicateEdit,
    /// Edits must be weaker than required.
    RequiredEdit,
}

/// Linear expression `sum(coef * var) + constant` over caller variables.
#[derive(Debug, Clone)]
pub struct Expr<V> {
    pub terms: Vec<(V, Num)>,
    pub constant: Num,
}

#[derive(Debug, Clone)]
pub struct Simplex<V: Ord + Clone> {
    constraints: BTreeMap<ConstraintId, ConstraintRecord>,
    var_symbols: BTreeMap<V, Symbol>,
    symbol_vars: BTreeMap<Symbol, V>,
    rows: BTreeMap<Symbol, Row>,
    edits: BTreeMap<V, EditInfo>,
    infeasible: Vec<Symbol>,
    objective: Row,
    tick: u64,
}

impl<V: Ord + Clone> Default for Simplex<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V: Ord + Clone> Simplex<V> {
    pub fn new() -> Self {
        Simplex {
            constraints: BTreeMap::new(),
            var_symbols: BTreeMap::new(),
            symbol_vars: BTreeMap::new(),
            rows: BTreeMap::new(),
            edits: BTreeMap::new(),
            infeasible: Vec::new(),
            objective: Row::default(),
            tick: 1,
        }
    }

    fn symbol(&mut self, kind: SymbolKind) -> Symbol {
        let s = Symbol {
            id: self.tick,
            kind,
        };
        self.tick += 1;
        s
    }

    fn var_symbol(&mut self, v: &V) -> Symbol {
        if let Some(s) = self.var_symbols.get(v) {
            return *s;
        }
        let s = self.symbol(SymbolKind::External);
        self.var_symbols.insert(v.clone(), s);
        self.symbol_vars.insert(s, v.clone());
        s
    }

    /// Add `expr op 0` at the given strength. A required constraint that
    /// cannot hold alongside the required constraints already present is
    /// rejected.
    ///
    /// On `Unsatisfiable` the tableau may have been pivoted; callers that need
    /// the previous state must keep a copy (see `SolverState`).
    pub fn add_constraint(
        &mut self,
        expr: &Expr<V>,
        op: Op,
        strength: Strength,
    ) -> Result<ConstraintId, SimplexError> {
        let (mut row, tag) = self.create_row(expr, op, strength);
        let mut subject = self.choose_subject(&row, tag);
        if subject.is_none() && row.cells.keys().all(|s| s.kind == SymbolKind::Dummy) {
            if !row.constant.is_zero() {
                return Err(SimplexError::Unsatisfiable);
            }
            subject = Some(tag.marker);
        }
        match subject {
            None => {
                if !self.add_with_artificial_variable(&row) {
                    return Err(SimplexError::Unsatisfiable);
                }
            }
            Some(s) => {
                row.solve_for(s);
                self.substitute(s, &row);
                self.rows.insert(s, row);
            }
        }
        let id = ConstraintId(self.tick);
        self.tick += 1;
        self.constraints.insert(id, ConstraintRecord { tag, strength });
        self.optimize_objective();
        Ok(id)
    }

    pub fn remove_constraint(&mut self, id: ConstraintId) -> Result<(), SimplexError> {
        let record = self
            .constraints
            .remove(&id)
            .ok_or(SimplexError::UnknownConstraint)?;
        let tag = record.tag;
        for marker in std::iter::once(tag.marker).chain(tag.other) {
            if marker.kind == SymbolKind::Error {
                let w = -record.strength.weight();
                match self.rows.get(&marker) {
                    Some(row) => {
                        let row = row.clone();
                        self.objective.insert_row(&row, &w);
                    }
                    None => self.objective.insert_symbol(marker, &w),
                }
            }
        }
        if self.rows.remove(&tag.marker).is_none() {
            let leaving = self
                .marker_leaving_row(tag.marker)
                .expect("marker appears in some row");
            let mut row = self.rows.remove(&leaving).expect("leaving row");
            row.solve_for_pair(leaving, tag.marker);
            self.substitute(tag.marker, &row);
        }
        self.optimize_objective();
        Ok(())
    }

    /// Register `v` as editable at a non-required strength.
    pub fn add_edit(&mut self, v: &V, strength: Strength) -> Result<(), SimplexError> {
        if self.edits.contains_key(v) {
            return Err(SimplexError::DuplicateEdit);
        }
        if strength == Strength::Required {
            return Err(SimplexError::RequiredEdit);
        }
        let expr = Expr {
            terms: vec![(v.clone(), Num::one())],
            constant: Num::zero(),
        };
        let id = self.add_constraint(&expr, Op::Eq, strength)?;
        let tag = self.constraints[&id].tag;
        self.edits.insert(
            v.clone(),
            EditInfo {
                constraint: id,
                tag,
                constant: Num::zero(),
            },
        );
        Ok(())
    }

    pub fn remove_edit(&mut self, v: &V) -> Result<(), SimplexError> {
        let info = self.edits.remove(v).ok_or(SimplexError::UnknownEdit)?;
        self.remove_constraint(info.constraint)
    }

    pub fn has_edit(&self, v: &V) -> bool {
        self.edits.contains_key(v)
    }

    /// Move the target of an edit and repair feasibility with the dual simplex.
    pub fn suggest(&mut self, v: &V, value: Num) -> Result<(), SimplexError> {
        let info = self.edits.get_mut(v).ok_or(SimplexError::UnknownEdit)?;
        let delta = &value - &info.constant;
        if delta.is_zero() {
            return Ok(());
        }
        info.constant = value;
        let tag = info.tag;

        if let Some(row) = self.rows.get_mut(&tag.marker) {
            if row.add(&-&delta).is_negative() {
                self.infeasible.push(tag.marker);
            }
        } else if let Some(other) = tag.other.filter(|o| self.rows.contains_key(o)) {
            let row = self.rows.get_mut(&other).expect("checked");
            if row.add(&delta).is_negative() {
                self.infeasible.push(other);
            }
        } else {
            for (basic, row) in self.rows.iter_mut() {
                let c = row.coefficient(tag.marker);
                if !c.is_zero()
                    && row.add(&(&delta * c)).is_negative()
                    && basic.kind != SymbolKind::External
                {
                    self.infeasible.push(*basic);
                }
            }
        }
        self.dual_optimize();
        Ok(())
    }

    /// Current value of a variable (0 if it was never mentioned).
    pub fn value(&self, v: &V) -> Num {
        self.var_symbols
            .get(v)
            .and_then(|s| self.rows.get(s))
            .map(|r| r.constant.clone())
            .unwrap_or_else(Num::zero)
    }

    pub fn variables(&self) -> impl Iterator<Item = &V> {
        self.var_symbols.keys()
    }

    fn create_row(&mut self, expr: &Expr<V>, op: Op, strength: Strength) -> (Row, Tag) {
        let mut row = Row::new(expr.constant.clone());
        for (v, c) in &expr.terms {
            if c.is_zero() {
                continue;
            }
            let s = self.var_symbol(v);
            match self.rows.get(&s) {
                Some(basic) => {
                    let basic = basic.clone();
                    row.insert_row(&basic, c);
                }
                None => row.insert_symbol(s, c),
            }
        }

        let tag = match op {
            Op::Le | Op::Ge => {
                let coef = if op == Op::Le { Num::one() } else { -Num::one() };
                let slack = self.symbol(SymbolKind::Slack);
                row.insert_symbol(slack, &coef);
                let other = if strength < Strength::Required {
                    let err = self.symbol(SymbolKind::Error);
                    row.insert_symbol(err, &-coef);
                    self.objective.insert_symbol(err, &strength.weight());
                    Some(err)
                } else {
                    None
                };
                Tag {
                    marker: slack,
                    other,
                }
            }
            Op::Eq => {
                if strength < Strength::Required {
                    let plus = self.symbol(SymbolKind::Error);
                    let minus = self.symbol(SymbolKind::Error);
                    row.insert_symbol(plus, &-Num::one());
                    row.insert_symbol(minus, &Num::one());
                    let w = strength.weight();
                    self.objective.insert_symbol(plus, &w);
                    self.objective.insert_symbol(minus, &w);
                    Tag {
                        marker: plus,
                        other: Some(minus),
                    }
                } else {
                    let dummy = self.symbol(SymbolKind::Dummy);
                    row.insert_symbol(dummy, &Num::one());
                    Tag {
                        marker: dummy,
                        other: None,
                    }
                }
            }
        };

        if row.constant.is_negative() {
            row.reverse_sign();
        }
        (row, tag)
    }

    fn choose_subject(&self, row: &Row, tag: Tag) -> Option<Symbol> {
        if let Some(s) = row.cells.keys().find(|s| s.kind == SymbolKind::External) {
            return Some(*s);
        }
        for s in std::iter::once(tag.marker).chain(tag.other) {
            if s.is_pivotable() && row.coefficient(s).is_negative() {
                return Some(s);
            }
        }
        None
    }

    fn add_with_artificial_variable(&mut self, row: &Row) -> bool {
        let art = self.symbol(SymbolKind::Slack);
        self.rows.insert(art, row.clone());
        let mut artificial = row.clone();
        self.optimize(&mut artificial);
        let success = artificial.constant.is_zero();

        if let Some(mut row) = self.rows.remove(&art) {
            if row.cells.is_empty() {
                return success;
            }
            let Some(entering) = row.cells.keys().copied().find(|s| s.is_pivotable()) else {
                return false;
            };
            row.solve_for_pair(art, entering);
            self.substitute(entering, &row);
            self.rows.insert(entering, row);
        }
        for row in self.rows.values_mut() {
            row.remove(art);
        }
        self.objective.remove(art);
        success
    }

    fn substitute(&mut self, s: Symbol, row: &Row) {
        for (basic, r) in self.rows.iter_mut() {
            r.substitute(s, row);
            if basic.kind != SymbolKind::External && r.constant.is_negative() {
                self.infeasible.push(*basic);
            }
        }
        self.objective.substitute(s, row);
    }

    fn optimize_objective(&mut self) {
        let mut objective = std::mem::take(&mut self.objective);
        self.optimize(&mut objective);
        self.objective = objective;
    }

    /// Primal simplex on `objective`, which is held outside `self` while it
    /// runs. For the artificial objective the real one is still kept in step
    /// by `substitute`.
    fn optimize(&mut self, objective: &mut Row) {
        loop {
            let entering = objective
                .cells
                .iter()
                .find(|(s, c)| s.kind != SymbolKind::Dummy && c.is_negative())
                .map(|(s, _)| *s);
            let Some(entering) = entering else {
                return;
            };
            let leaving = self
                .leaving_row(entering)
                .expect("objective is bounded below by construction");
            let mut row = self.rows.remove(&leaving).expect("leaving row");
            row.solve_for_pair(leaving, entering);
            self.substitute(entering, &row);
            objective.substitute(entering, &row);
            self.rows.insert(entering, row);
        }
    }

    fn leaving_row(&self, entering: Symbol) -> Option<Symbol> {
        let mut best: Option<(Num, Symbol)> = None;
        for (basic, row) in &self.rows {
            if basic.kind == SymbolKind::External {
                continue;
            }
            let c = row.coefficient(entering);
            if c.is_negative() {
                let ratio = -&row.constant / c;
                if best.as_ref().map_or(true, |(r, _)| ratio < *r) {
                    best = Some((ratio, *basic));
                }
            }
        }
        best.map(|(_, s)| s)
    }

    fn marker_leaving_row(&self, marker: Symbol) -> Option<Symbol> {
        let mut first: Option<(Num, Symbol)> = None;
        let mut second: Option<(Num, Symbol)> = None;
        let mut third: Option<Symbol> = None;
        for (basic, row) in &self.rows {
            let c = row.coefficient(marker);
            if c.is_zero() {
                continue;
            }
            if basic.kind == SymbolKind::External {
                third = Some(*basic);
            } else if c.is_negative() {
                let r = -&row.constant / &c;
                if first.as_ref().map_or(true, |(b, _)| r < *b) {
                    first = Some((r, *basic));
                }
            } else {
                let r = &row.constant / &c;
                if second.as_ref().map_or(true, |(b, _)| r < *b) {
                    second = Some((r, *basic));
                }
            }
        }
        first.map(|f| f.1).or(second.map(|s| s.1)).or(third)
    }

    fn dual_optimize(&mut self) {
        while let Some(leaving) = self.infeasible.pop() {
            let Some(row) = self.rows.get(&leaving) else {
                continue;
            };
            if !row.constant.is_negative() {
                continue;
            }
            let mut entering: Option<(Num, Symbol)> = None;
            for (s, c) in &row.cells {
                if c.is_positive() && s.kind != SymbolKind::Dummy {
                    let r = self.objective.coefficient(*s) / c;
                    if entering.as_ref().map_or(true, |(b, _)| r < *b) {
                        entering = Some((r, *s));
                    }
                }
            }
            let (_, entering) =
                entering.expect("dual simplex: edits never make required rows infeasible");
            let mut row = self.rows.remove(&leaving).expect("present");
            row.solve_for_pair(leaving, entering);
            self.substitute(entering, &row);
            self.rows.insert(entering, row);
        }
    }
}
