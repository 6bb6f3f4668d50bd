//! Exact computer algebra for weighted-degree reduction of polynomial
//! automorphisms of `Q[x1, x2, x3]`.
//!
//! Layers, bottom-up: [`degree`] and [`poly`] (graded arithmetic), [`forms`]
//! (exterior differentials), [`univariate`] (polynomials over `k[x][y]`
//! evaluated at a polynomial), [`search`] (bounded leading-form membership and
//! reduction discovery), [`su`] (condition checkers), and [`engine`]
//! (reduction traces, factorization, certificates).

pub mod degree;
pub mod endo;
pub mod engine;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod newton;
pub mod poly;
pub mod search;
pub mod su;
pub mod sured;
pub mod text;
pub mod types;
pub mod univariate;

pub use degree::{half, semigroup_member, z_independent, DegreeValue, WeightSystem};
pub use error::{Error, Result};
pub use poly::{q, qr, Coeff, Monomial, Polynomial};
pub use text::parse_polynomial;
