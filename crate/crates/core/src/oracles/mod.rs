//! Numerical checks of the analytic identities behind the index formula.

mod dixmier;
mod lemma3;
pub mod quadrature;
mod simplex;

pub use dixmier::{dixmier_estimate, uniform_field, DixmierEstimate};
pub use lemma3::{lemma3_lhs, lemma3_rhs, Lemma3Quadrature, Lemma3Value, MAX_POINT_NORM};
pub use simplex::{simplex_volume, Simplex};
