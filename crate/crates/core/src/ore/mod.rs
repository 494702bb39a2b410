//! The noncommutative ring D = K[d₁..dₙ] of linear differential operators
//! with the commutation relations d_i a = a d_i + ∂_i a, operator matrices,
//! formal adjoints and the formal action on jet coordinates.
//!
//! Canonical form keeps coefficients on the left and monomials d_μ on the
//! right (left D-module convention), so representation is unique and equality
//! is structural.

mod multiindex;
mod operator;

pub use multiindex::MultiIndex;
pub use operator::{frame_change_between, identity_matrix, invert_matrix, OperatorMatrix, OreContext, OreOperator};
