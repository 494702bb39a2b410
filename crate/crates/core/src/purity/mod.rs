//! Codimension and purity filtration, class restriction, relative
//! localization over k(χ), the purity test, relative parametrization, the
//! pure-module embedding, and monomial characteristic-ideal utilities.

mod embed;
mod filtration;
mod localize;
mod monomial;
mod parametrize;
mod restrict;

pub use embed::{embed_pure_module, Embedding};
pub use filtration::{codimension, purity_test, FiltrationLevel, PurityReport};
pub use localize::{
    content_normalize, delocalize_form, localize_jet_system, localized_context,
    relative_localization, LocalizedSystem,
};
pub use monomial::MonomialIdeal;
pub use parametrize::{relative_parametrization, Parametrization};
pub use restrict::{restrict_to_classes, restricted_context, RestrictedSystem};
