//! Exact computations for diagram monoids with evaluated closed components.

pub mod cells;
pub mod diagram;
pub mod dims;
pub mod error;
pub mod gram;
pub mod green;
pub mod monoid;
pub mod nonss;
pub mod suite;
pub mod twist;
pub mod walks;

pub use diagram::{compose, enumerate, evaluate, Diagram, EvaluationMap, Flavor, GenusMultiset, Label, ProductOutcome};
pub use error::{Error, Result};
pub use green::{green, GreenStructure};
pub use monoid::{build_diagram_monoid, DiagramProducts, ElementLabel, FiniteMonoid};
