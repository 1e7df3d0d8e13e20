//! Quantum tori, matrix algebras over them, and the fixed points of the
//! matrix involutions built from them, computed exactly on grading windows.

pub mod matrix;
pub mod scenario;
pub mod torus;

pub use matrix::{Block, TorusMatrix};
pub use scenario::{
    core_and_tameness, fixed_subalgebra, roots_of_fixed, ExampleId, ExampleScenario, FixedSubalgebra, RootsReport,
    TamenessReport, TamenessVerdict,
};
pub use torus::{TorusElement, TorusPresentation};
