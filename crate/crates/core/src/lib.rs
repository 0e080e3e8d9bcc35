//! Finite universal-algebra workbench for Almost Gautama algebras.

pub mod algebra;
pub mod amalgamation;
pub mod axioms;
pub mod builtins;
pub mod congruence;
pub mod error;
pub mod limits;
pub mod morphism;
pub mod partition;
pub mod pipeline;
pub mod report;
pub mod term;
pub mod variety;

pub use algebra::{direct_product, dump_algebra, load_algebra, AlgebraSpec, Element, FiniteAlgebra};
pub use builtins::{builtin, Builtin};
pub use error::{Error, Result};
pub use limits::Limits;
