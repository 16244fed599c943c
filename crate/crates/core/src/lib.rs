//! Holistic quantum computational semantics.
//!
//! Formulas are compiled to gate trees over qubit registers; a model assigns
//! a density operator to every level of a formula's syntactical tree, and the
//! meaning of a subformula is the reduced state of its block.

pub mod error;
pub mod formula;
pub mod gates;
pub mod harness;
pub mod perspective;
pub mod semantics;
pub mod spec;
pub mod tensor;
pub mod tol;

pub use error::{Error, Result};
pub use formula::{parse, Formula, SyntacticalTree};
pub use perspective::TruthPerspective;
pub use semantics::{ScopedModel, Verdict};
pub use spec::ModelSpec;
pub use tensor::{Partition, Qumix, StateVector};
