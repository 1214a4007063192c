//! Finite-depth constructions from the descriptive set theory of the plane:
//! Cantor-space points, enumeration bijections, trees on `2 × 2`, tests and
//! the trees they generate, the `ρ₀` tower and the example sets built from it.

pub mod antichain;
pub mod enumeration;
pub mod error;
pub mod leveltrees;
pub mod rho;
pub mod testgen;
pub mod words;

pub use error::{Error, Result};
pub use words::{LastDifference, PointPair, RationalPoint, Word};
