//! Condition numbers of simple eigenvalues of structured rational matrix
//! functions.

pub mod conditioning;
pub mod eigensolve;
pub mod error;
pub mod generate;
pub mod linalg;
pub mod mapping;
pub mod poly;
pub mod problem;
pub mod report;
pub mod rmf;
pub mod structure;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{CMat, CVec};
pub use poly::C64;
pub use rmf::{PerturbationTuple, RationalTerm, Rmf, Weight};
pub use structure::{classify_weight, validate_structure, StructureTag, Transform, WeightClass};
pub use tolerance::Tolerances;
