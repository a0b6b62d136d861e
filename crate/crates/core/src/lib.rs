//! Computational audit of deformations of `SL_n` over finite complete
//! noetherian local rings: ring arithmetic, matrix groups, Steinberg relations,
//! group cohomology of the adjoint modules and the lifting problems built on it.

pub mod cohomology;
pub mod deformation;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod matrices;
pub mod report;
pub mod rings;
pub mod sln;
pub mod suites;

pub use error::{Error, Result};
