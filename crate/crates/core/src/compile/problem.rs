use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Provenance;
use crate::spec::GroupTarget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
}

/// What a layout variable belongs to. Group boxes use two owners per group:
/// `GroupMin` holds the left/top edges and `GroupMax` the right/bottom edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarOwner {
    Atom(String),
    GroupMin(String),
    GroupMax(String),
    CycleCenter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LayoutVar {
    pub owner: VarOwner,
    pub axis: Axis,
}

impl LayoutVar {
    pub fn atom(id: &str, axis: Axis) -> Self {
        LayoutVar {
            owner: VarOwner::Atom(id.to_string()),
            axis,
        }
    }

    pub fn x(id: &str) -> Self {
        Self::atom(id, Axis::X)
    }

    pub fn y(id: &str) -> Self {
        Self::atom(id, Axis::Y)
    }
}

impl fmt::Display for LayoutVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, axis) = match (&self.owner, self.axis) {
            (VarOwner::Atom(id), Axis::X) => return write!(f, "x({id})"),
            (VarOwner::Atom(id), Axis::Y) => return write!(f, "y({id})"),
            (VarOwner::GroupMin(g), Axis::X) => (g, "left"),
            (VarOwner::GroupMin(g), Axis::Y) => (g, "top"),
            (VarOwner::GroupMax(g), Axis::X) => (g, "right"),
            (VarOwner::GroupMax(g), Axis::Y) => (g, "bottom"),
            (VarOwner::CycleCenter(c), Axis::X) => (c, "cx"),
            (VarOwner::CycleCenter(c), Axis::Y) => (c, "cy"),
        };
        write!(f, "{axis}({name})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `expr == 0`
    Eq,
    /// `expr <= 0`
    Le,
}

/// `sum(coef * var) + constant (== | <=) 0`, with the spec line and atoms it
/// came from.
#[derive(Debug, Clone, PartialEq)]
pub struct LinConstraint {
    pub relation: Relation,
    pub terms: Vec<(LayoutVar, BigRational)>,
    pub constant: BigRational,
    pub provenance: Provenance,
}

/// Exact rational for a float; panics on NaN/inf, which never reach here.
pub fn rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite layout constant")
}

/// A float snapped to a 1/1024 grid. Keeps solver denominators small for
/// values that are only preferences (seeds, drag targets).
pub fn grid_rational(v: f64) -> BigRational {
    let scaled = (v * 1024.0).round();
    BigRational::new(BigInt::from(scaled as i64), BigInt::from(1024))
}

impl LinConstraint {
    fn build(
        relation: Relation,
        terms: Vec<(LayoutVar, BigRational)>,
        constant: BigRational,
        provenance: Provenance,
    ) -> Self {
        let mut merged: Vec<(LayoutVar, BigRational)> = Vec::new();
        for (v, c) in terms {
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some((_, acc)) => *acc += c,
                None => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        LinConstraint {
            relation,
            terms: merged,
            constant,
            provenance,
        }
    }

    /// `hi - lo >= gap`
    pub fn gap(lo: LayoutVar, hi: LayoutVar, gap: f64, provenance: Provenance) -> Self {
        let one = BigRational::from_integer(1.into());
        Self::build(
            Relation::Le,
            vec![(lo, one.clone()), (hi, -one)],
            rational(gap),
            provenance,
        )
    }

    /// `a - b == offset`
    pub fn offset(a: LayoutVar, b: LayoutVar, offset: f64, provenance: Provenance) -> Self {
        let one = BigRational::from_integer(1.into());
        Self::build(
            Relation::Eq,
            vec![(a, one.clone()), (b, -one)],
            -rational(offset),
            provenance,
        )
    }

    pub fn new(
        relation: Relation,
        terms: Vec<(LayoutVar, BigRational)>,
        constant: BigRational,
        provenance: Provenance,
    ) -> Self {
        Self::build(relation, terms, constant, provenance)
    }

    pub fn vars(&self) -> impl Iterator<Item = &LayoutVar> {
        self.terms.iter().map(|(v, _)| v)
    }

    /// Amount by which a float assignment violates this constraint (0 when
    /// satisfied). Unknown variables read as NaN, which reports as violated.
    pub fn violation(&self, value: impl Fn(&LayoutVar) -> Option<f64>) -> f64 {
        let mut lhs = self.constant.to_f64().unwrap_or(f64::NAN);
        for (v, c) in &self.terms {
            let x = value(v).unwrap_or(f64::NAN);
            lhs += c.to_f64().unwrap_or(f64::NAN) * x;
        }
        if lhs.is_nan() {
            return f64::INFINITY;
        }
        match self.relation {
            Relation::Eq => lhs.abs(),
            Relation::Le => lhs.max(0.0),
        }
    }
}

impl fmt::Display for LinConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag != BigRational::from_integer(1.into()) {
                write!(f, "{}*", mag.to_f64().unwrap_or(f64::NAN))?;
            }
            write!(f, "{v}")?;
        }
        if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", self.constant.abs().to_f64().unwrap_or(f64::NAN))?;
        }
        match self.relation {
            Relation::Eq => f.write_str(" == 0"),
            Relation::Le => f.write_str(" <= 0"),
        }
    }
}

/// Endpoint of a drawn edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum Endpoint {
    Node(String),
    Group(String),
}

impl Endpoint {
    pub fn id(&self) -> &str {
        match self {
            Endpoint::Node(id) | Endpoint::Group(id) => id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: Endpoint,
    pub to: Endpoint,
    pub field: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub id: String,
    pub field: String,
    pub key: String,
    pub target: GroupTarget,
    /// Members in instance atom order.
    pub members: Vec<String>,
    /// Spec line of the grouping constraint.
    pub line: usize,
}

impl Group {
    pub fn min_var(&self, axis: Axis) -> LayoutVar {
        LayoutVar {
            owner: VarOwner::GroupMin(self.id.clone()),
            axis,
        }
    }

    pub fn max_var(&self, axis: Axis) -> LayoutVar {
        LayoutVar {
            owner: VarOwner::GroupMax(self.id.clone()),
            axis,
        }
    }

    pub fn box_vars(&self) -> [LayoutVar; 4] {
        [
            self.min_var(Axis::X),
            self.max_var(Axis::X),
            self.min_var(Axis::Y),
            self.max_var(Axis::Y),
        ]
    }
}

/// A node that survives projection and visibility, with its drawn size.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub id: String,
    pub width: f64,
    pub height: f64,
}

/// Cycle bookkeeping kept for geometry checks and refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleComponent {
    pub id: String,
    pub field: String,
    /// Depth-first order; member `i` sits at angle `i * step` from the top.
    pub order: Vec<String>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LayoutProblem {
    pub nodes: Vec<NodeSpec>,
    pub constraints: Vec<LinConstraint>,
    pub groups: Vec<Group>,
    pub cycles: Vec<CycleComponent>,
    pub edges: Vec<Edge>,
    /// Edges for the default layered layout and the refinement stress model:
    /// every surviving tuple, before grouping and attribute suppression.
    pub structure: Vec<(String, String)>,
}

impl LayoutProblem {
    pub fn node(&self, id: &str) -> Option<&NodeSpec> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn group(&self, id: &str) -> Option<&Group> {
        self.groups.iter().find(|g| g.id == id)
    }

    /// Every layout variable, in a fixed order: atoms, then cycle centers,
    /// then group boxes.
    pub fn vars(&self) -> Vec<LayoutVar> {
        let mut out = Vec::new();
        for n in &self.nodes {
            out.push(LayoutVar::x(&n.id));
            out.push(LayoutVar::y(&n.id));
        }
        for c in &self.cycles {
            for axis in [Axis::X, Axis::Y] {
                out.push(LayoutVar {
                    owner: VarOwner::CycleCenter(c.id.clone()),
                    axis,
                });
            }
        }
        for g in &self.groups {
            out.extend(g.box_vars());
        }
        out
    }

    /// True when nothing constrains positions: the default layout stands.
    pub fn is_unconstrained(&self) -> bool {
        self.constraints.is_empty() && self.groups.is_empty()
    }
}
