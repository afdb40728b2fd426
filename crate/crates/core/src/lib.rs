//! Numerical laboratory for truncated Toeplitz operators on finite-dimensional
//! model spaces `K_u`, where `u` is a finite Blaschke product.
//!
//! The crate builds operators as dense matrices in the Takenaka–Malmquist
//! basis, tests membership in the space of truncated Toeplitz operators,
//! classifies operators by type `α ∈ ℂ ∪ {∞}`, and checks the algebraic
//! structure around the generalized shifts `S_α`: commutants, products,
//! inverses, Crofoot transforms and Clark unitaries.

pub mod blaschke;
pub mod cli;
pub mod crofoot_clark;
pub mod error;
pub mod json;
pub mod linalg;
pub mod model_space;
pub mod poly;
pub mod sample;
pub mod symbol;
pub mod tto;
pub mod type_algebra;
pub mod verify;

pub use blaschke::BlaschkeProduct;
pub use error::{Result, TtoError};
pub use linalg::{CMatrix, CVector};
pub use model_space::{ModelSpace, ModelVector, SpaceConfig, Tolerances};
pub use num_complex::Complex64;
pub use poly::{Poly, RationalPair};
pub use symbol::{RationalTerm, SymbolExpr};
