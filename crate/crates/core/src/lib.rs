//! Numerical toolkit for compact matrix Lie algebras.
//!
//! The pipeline runs from a classical matrix algebra through its Killing form,
//! a Cartan subalgebra and root decomposition, to the Weyl group, the Dynkin
//! diagram and the extrinsic geometry of adjoint orbits.

pub mod adjoint;
pub mod algebra;
pub mod cartan;
pub mod dynkin;
pub mod error;
pub mod geometry;
pub mod numlin;
pub mod weyl;

pub use error::{LieError, Result};
pub use numlin::ComplexMatrix;
