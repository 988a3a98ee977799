//! Exact computations with dihedral Soergel bimodules.

pub mod bimodule;
pub mod braid;
pub mod complexes;
pub mod dihedral;
pub mod error;
pub mod groebner;
pub mod hecke;
pub mod homology;
pub mod indecomposable;
pub mod linalg;
pub mod matrix;
pub mod polyring;
pub mod rational;
pub mod scalars;
pub mod serre;
pub mod trace;

pub use error::{Error, Result};
