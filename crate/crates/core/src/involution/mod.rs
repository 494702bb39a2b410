//! Completion to involution with multiplicative boards, characters, Hilbert
//! functions, δ-regular frame search, first-order (Spencer form) reduction
//! and the reduced Spencer form.

mod board;
mod complete;
mod hilbert;
mod reduction;

pub use board::{
    alphas, betas, binom, board_latex, frame_score, symbol_involutive, system_involutive, Board,
    BoardRow,
};
pub use complete::{
    complete_to_involution, complete_tracked, complete_with_partial, Characters, CompletionConfig,
    InvolutiveSystem,
};
pub use reduction::{
    first_order_reduction, reduced_spencer_form, ReductionDictionary, SpencerSubstitution,
};
