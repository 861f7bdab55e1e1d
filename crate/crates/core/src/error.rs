//! Error taxonomy shared by every stage of the pipeline.

use std::fmt;

use thiserror::Error;

use crate::spec::Direction;

/// Malformed or referentially broken input (instance JSON, params, colors).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct InputError {
    pub message: String,
}

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        InputError {
            message: message.into(),
        }
    }
}

/// A syntax error in a CnD program.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Parse error at line {}, column {}: ", self.line, self.column)?;
        if self.found.is_empty() {
            write!(f, "unexpected end of line")?;
        } else {
            write!(f, "unexpected `{}`", self.found)?;
        }
        if !self.expected.is_empty() {
            write!(f, "; expected one of: {}", self.expected.join(", "))?;
        }
        write!(f, ".")
    }
}

/// The same field is laid out in directions that can never hold together.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct StaticInconsistencyError {
    pub field: String,
    pub directions: Vec<Direction>,
}

impl fmt::Display for StaticInconsistencyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dirs: Vec<&str> = self.directions.iter().map(|d| d.as_str()).collect();
        write!(
            f,
            "Inconsistent orientation constraint: Field {} cannot be laid out with directions: {}.",
            self.field,
            dirs.join(", ")
        )
    }
}

/// A spec that parses and is statically consistent but does not fit the instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("Unknown field `{field}` referenced on line {line}.")]
    UnknownField { field: String, line: usize },
    #[error("Unknown sig `{sig}` referenced on line {line}.")]
    UnknownSig { sig: String, line: usize },
    #[error("Field `{field}` on line {line} has arity {arity}; layout constraints and attributes need a binary field.")]
    NotBinary {
        field: String,
        arity: usize,
        line: usize,
    },
}

/// Where a linear constraint came from: the spec line, its canonical text and
/// the instance atoms it mentions.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Provenance {
    pub line: usize,
    pub text: String,
    pub atoms: Vec<String>,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {} ({})", self.line, self.text)?;
        if !self.atoms.is_empty() {
            write!(f, ": {}", self.atoms.join(", "))?;
        }
        Ok(())
    }
}

/// Two groups share some, but not all, of their members.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct GroupOverlapError {
    pub first: String,
    pub second: String,
    pub shared: Vec<String>,
}

impl fmt::Display for GroupOverlapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Overlapping groups: {} and {} intersect without one containing the other; shared atoms: {}.",
            self.first,
            self.second,
            self.shared.join(", ")
        )
    }
}

/// The first required constraint that could not be added, plus everything
/// that was accepted before it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct UnsatError {
    pub failing: Provenance,
    pub context: Vec<Provenance>,
}

impl UnsatError {
    pub fn atoms(&self) -> &[String] {
        &self.failing.atoms
    }
}

impl fmt::Display for UnsatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Unsatisfiable layout: constraint from line {} ({}) cannot be satisfied for atoms: {}.",
            self.failing.line,
            self.failing.text,
            self.failing.atoms.join(", ")
        )?;
        write!(f, "\nConstraints added so far:")?;
        for p in &self.context {
            write!(f, "\n  {p}")?;
        }
        Ok(())
    }
}

/// Anything that stops a diagram from being produced.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Static(#[from] StaticInconsistencyError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    GroupOverlap(#[from] GroupOverlapError),
    #[error(transparent)]
    Unsat(#[from] UnsatError),
}

impl LayoutError {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            LayoutError::Static(_) => 1,
            LayoutError::Unsat(_) | LayoutError::GroupOverlap(_) => 2,
            LayoutError::Input(_) | LayoutError::Parse(_) | LayoutError::Compile(_) => 3,
        }
    }

    /// Error kind tag used in service payloads.
    pub fn kind(&self) -> &'static str {
        match self {
            LayoutError::Input(_) | LayoutError::Compile(_) => "input",
            LayoutError::Parse(_) => "parse",
            LayoutError::Static(_) => "static",
            LayoutError::GroupOverlap(_) => "group",
            LayoutError::Unsat(_) => "unsat",
        }
    }
}
