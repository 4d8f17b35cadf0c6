//! Integer lifts of binary chain complexes and the tools around them: exact
//! linear algebra over F₂ and ℤ, CSS codes and their distances, decongested
//! cycle bases, and a combinatorial handle skeleton.

pub mod bits;
pub mod codes;
pub mod complex;
pub mod decongestion;
pub mod error;
pub mod io;
pub mod lifting;
pub mod matrix;
pub mod skeleton;
pub mod zhomology;

pub use bits::Bits;
pub use complex::{ChainComplex2, ChainComplexZ, Validation};
pub use error::{Error, Result};
pub use matrix::{BinMatrix, IntMatrix};
