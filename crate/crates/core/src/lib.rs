//! Enriched (back-stable) Schubert and Grothendieck polynomials.

pub mod chern_series;
pub mod coproduct;
pub mod error;
pub mod families;
pub mod operators;
pub mod oracle;
pub mod permutation;
pub mod poly;
pub mod positivity;

pub use error::{Error, Result};
pub use permutation::{Partition, Permutation, Triple};
pub use poly::{GradedPoly, Int, Monomial, Var};
