//! The CnD language: AST, concrete syntax and static consistency checking.
//!
//! Programs are line oriented. Each non-blank line holds one statement:
//!
//! ```text
//! cyclic <field> [clockwise|counterclockwise]
//! orient field <field> <dir>(,<dir>)*
//! orient sig <sigA> <sigB> <dir>(,<dir>)*
//! group <field> [range|domain]
//! icon <sig> <path> <height> <width>
//! attribute <field>
//! color <sig> <color>
//! project <sig>
//! flag hideDisconnected|hideDisconnectedBuiltIns
//! ```
//!
//! `#` starts a comment when it opens a line or is surrounded by whitespace,
//! so `color Light #ff0000` keeps its hex color.

mod check;
mod parse;

use std::fmt;

pub use check::{check_static, conflicts};
pub use parse::parse_spec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Above,
    Below,
    Left,
    Right,
    DirectlyAbove,
    DirectlyBelow,
    DirectlyLeft,
    DirectlyRight,
}

/// Placement of a target relative to its source along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisOrder {
    /// Smaller coordinate, separated by at least the separation constant.
    Before,
    /// Larger coordinate, separated by at least the separation constant.
    After,
    /// Equal coordinate.
    Aligned,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::Above,
        Direction::Below,
        Direction::Left,
        Direction::Right,
        Direction::DirectlyAbove,
        Direction::DirectlyBelow,
        Direction::DirectlyLeft,
        Direction::DirectlyRight,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Above => "above",
            Direction::Below => "below",
            Direction::Left => "left",
            Direction::Right => "right",
            Direction::DirectlyAbove => "directlyAbove",
            Direction::DirectlyBelow => "directlyBelow",
            Direction::DirectlyLeft => "directlyLeft",
            Direction::DirectlyRight => "directlyRight",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| d.as_str() == s)
    }

    /// What the direction demands of `(x, y)` for a target relative to its
    /// source. Screen coordinates: y grows downward.
    pub fn axes(self) -> (Option<AxisOrder>, Option<AxisOrder>) {
        use AxisOrder::*;
        match self {
            Direction::Left => (Some(Before), None),
            Direction::Right => (Some(After), None),
            Direction::Above => (None, Some(Before)),
            Direction::Below => (None, Some(After)),
            Direction::DirectlyLeft => (Some(Before), Some(Aligned)),
            Direction::DirectlyRight => (Some(After), Some(Aligned)),
            Direction::DirectlyAbove => (Some(Aligned), Some(Before)),
            Direction::DirectlyBelow => (Some(Aligned), Some(After)),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Flow {
    #[default]
    Clockwise,
    Counterclockwise,
}

impl Flow {
    pub fn as_str(self) -> &'static str {
        match self {
            Flow::Clockwise => "clockwise",
            Flow::Counterclockwise => "counterclockwise",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GroupTarget {
    Domain,
    #[default]
    Range,
}

impl GroupTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupTarget::Domain => "domain",
            GroupTarget::Range => "range",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Selector {
    Field(String),
    /// Every atom of the first sig is placed relative to every atom of the
    /// second: `orient sig A B left` puts each A left of each B.
    SigPair(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicConstraint {
    pub field: String,
    pub flow: Flow,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrientationConstraint {
    pub selector: Selector,
    pub directions: Vec<Direction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupingConstraint {
    pub field: String,
    pub target: GroupTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constraint {
    Cyclic(CyclicConstraint),
    Orientation(OrientationConstraint),
    Grouping(GroupingConstraint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VisibilityFlag {
    HideDisconnected,
    HideDisconnectedBuiltIns,
}

impl VisibilityFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            VisibilityFlag::HideDisconnected => "hideDisconnected",
            VisibilityFlag::HideDisconnectedBuiltIns => "hideDisconnectedBuiltIns",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Directive {
    Icon {
        sig: String,
        path: String,
        height: u32,
        width: u32,
    },
    Attribute {
        field: String,
    },
    SigColor {
        sig: String,
        color: String,
    },
    Projection {
        sig: String,
    },
    Flag(VisibilityFlag),
}

/// A statement together with the 1-based source line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located<T> {
    pub line: usize,
    pub item: T,
}

/// A parsed CnD program. Statement order is source order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CndSpec {
    pub constraints: Vec<Located<Constraint>>,
    pub directives: Vec<Located<Directive>>,
}

impl CndSpec {
    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty() && self.directives.is_empty()
    }

    /// Statements without their line numbers, for structural comparison.
    pub fn statements(&self) -> (Vec<&Constraint>, Vec<&Directive>) {
        (
            self.constraints.iter().map(|c| &c.item).collect(),
            self.directives.iter().map(|d| &d.item).collect(),
        )
    }

    pub fn has_flag(&self, flag: VisibilityFlag) -> bool {
        self.directives
            .iter()
            .any(|d| d.item == Directive::Flag(flag))
    }

    /// Canonical source: one statement per line, constraints first.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for c in &self.constraints {
            out.push_str(&c.item.to_string());
            out.push('\n');
        }
        for d in &self.directives {
            out.push_str(&d.item.to_string());
            out.push('\n');
        }
        out
    }
}

fn write_directions(f: &mut fmt::Formatter<'_>, dirs: &[Direction]) -> fmt::Result {
    for (i, d) in dirs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        f.write_str(d.as_str())?;
    }
    Ok(())
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Cyclic(c) => write!(f, "cyclic {} {}", c.field, c.flow.as_str()),
            Constraint::Orientation(o) => {
                match &o.selector {
                    Selector::Field(field) => write!(f, "orient field {field} ")?,
                    Selector::SigPair(a, b) => write!(f, "orient sig {a} {b} ")?,
                }
                write_directions(f, &o.directions)
            }
            Constraint::Grouping(g) => write!(f, "group {} {}", g.field, g.target.as_str()),
        }
    }
}

fn needs_quotes(path: &str) -> bool {
    path.is_empty()
        || path.starts_with('"')
        || path.starts_with('#')
        || path.chars().any(|c| c.is_whitespace() || c == ',')
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Directive::Icon {
                sig,
                path,
                height,
                width,
            } => {
                if needs_quotes(path) {
                    write!(f, "icon {sig} \"{path}\" {height} {width}")
                } else {
                    write!(f, "icon {sig} {path} {height} {width}")
                }
            }
            Directive::Attribute { field } => write!(f, "attribute {field}"),
            Directive::SigColor { sig, color } => write!(f, "color {sig} {color}"),
            Directive::Projection { sig } => write!(f, "project {sig}"),
            Directive::Flag(flag) => write!(f, "flag {}", flag.as_str()),
        }
    }
}
