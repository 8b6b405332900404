//! Exact-arithmetic workbench for derived deformation theory: Maurer-Cartan
//! sets and gauge equivalence of finite-dimensional DGLAs with coefficients
//! in local Artinian cdgas, obstruction calculus, bar/cobar truncations and
//! simplicial comparison machinery. All scalars are exact rationals.

pub mod artin;
pub mod complexes;
pub mod dgla;
pub mod koszul;
pub mod error;
pub mod format;
pub mod harness;
pub mod mcgauge;
pub mod qlinalg;
pub mod simplicial;

pub use error::{Error, Result};
pub use qlinalg::{RatMatrix, Q};
