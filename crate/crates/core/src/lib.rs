//! Numerical toolkit for H-type groups.
//!
//! The crate is `no_std` with `alloc`. Everything is serial and deterministic;
//! random sampling goes through seeded ChaCha generators.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod clifford;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod kernel;
pub mod linalg;
pub mod nnls;
pub mod operators;
pub mod pipeline;
pub mod quadrature;
pub mod schoenberg;
pub mod special;

pub use algebra::{build_structure, GroupPoint, HTypeStructure};
pub use error::{Error, Result};
pub use grid::{GridFunction, GridSpec};
pub use num_complex::Complex64;
