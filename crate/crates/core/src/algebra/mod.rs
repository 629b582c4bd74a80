//! Exact algebra: named variable registries, Laurent monomials, monomial
//! orders and sparse rational polynomials.

mod monomial;
mod order;
mod parse;
mod polynomial;
mod registry;

pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use parse::identifiers;
pub use polynomial::{rat, Polynomial};
pub use registry::Registry;
