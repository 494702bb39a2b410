//! Finite-dimensional linear algebra on jet coordinates: echelonization,
//! prolongation, projection, symbols, the δ-map and its cohomology, sections
//! of the inverse system R = hom_K(M, K), and the Spencer operator.

mod coord;
mod delta;
mod form;
mod sections;
pub mod system;

pub use coord::{JetCoord, JetOrder};
pub use delta::delta_cohomology;
pub use form::LinForm;
pub use sections::{sections_at_order, spencer_apply, Section};
pub use system::{echelon_rows, reduce_row, JetSystem, OpRow, RowPayload, SymbolTable};
