//! Exact computations with extended affine root systems, their fixed points
//! under finite-order automorphisms, quantum-torus matrix algebras and
//! affinizations.

pub mod affine;
pub mod cyclotomic;
pub mod ears;
pub mod error;
pub mod fixpoint;
pub mod finroot;
pub mod lattice;
pub mod linalg;
pub mod qtorus;
pub mod scalar;

pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use lattice::{CosetEnumerator, Form, IntLattice, IntVector, Semilattice};
pub use linalg::{EchelonBasis, Matrix};
pub use scalar::Field;

pub type Rational = num_rational::BigRational;
pub type QMatrix = Matrix<Rational>;
pub type RationalForm = Form<Rational>;
pub type CyclotomicMatrix = Matrix<Cyclotomic>;
