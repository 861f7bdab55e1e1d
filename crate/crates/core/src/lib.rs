//! Constraint-based diagramming for relational instances.

pub mod compile;
pub mod error;
pub mod instance;
pub mod layout;
pub mod params;
pub mod pipeline;
pub mod render;
pub mod service;
pub mod solver;
pub mod spec;
pub mod style;

pub use error::LayoutError;
pub use instance::Instance;
pub use params::LayoutParams;
pub use spec::{parse_spec, CndSpec};
