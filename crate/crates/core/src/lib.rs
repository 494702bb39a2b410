//! Exact-arithmetic workbench for linear systems of partial differential
//! equations over ℚ or ℚ(x¹..xⁿ).
//!
//! The crate completes a linear PDE system to involution, reads off its
//! multiplicative board, characters and Hilbert function, builds Janet
//! sequences and free resolutions, computes extension modules and torsion
//! through formal adjoints, and tests purity / produces relative
//! parametrizations of pure differential modules.
//!
//! Everything is exact: coefficients live in ℚ(x¹..xⁿ) (optionally extended
//! by named constants and localization parameters χ) and every certified
//! identity is an identity of operators, not a numerical check.

pub mod arith;
pub mod frontend;
pub mod homology;
pub mod involution;
pub mod jets;
pub mod ore;
pub mod purity;
pub mod report;

mod error;

pub use error::{Error, Result};
