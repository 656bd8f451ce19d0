//! Exact computer algebra for level-1 quasimodular forms.
//!
//! Everything lives in the polynomial ring `Q[E2, E4, E6]` graded by weight
//! (2, 4, 6) and filtered by depth (the E2-degree), with truncated
//! q-expansions kept around as an independent oracle.
//!
//! - [`numkernel`]: Bernoulli numbers, binomials, factorials, divisor sums
//! - [`qseries`]: truncated q-expansions, Eisenstein series, `Delta`, `tau`
//! - [`ring`]: [`GradedPoly`], [`QuasiForm`] and the Ramanujan derivation
//! - [`depth`]: normalized depth components and the derivative laws they obey
//! - [`brackets`]: Rankin-Cohen brackets for quasimodular forms
//! - [`spaces`]: graded bases, structure decomposition, membership tests
//! - [`coeffsolver`]: re-derivation of the bracket coefficients by linear algebra
//! - [`wz`]: the certificate behind the `[E2, E2]_{2m+2}` argument
//! - [`identities`]: end-to-end verifiers for the classical identities
//! - [`expr`]: a small expression language over the generators
//! - [`grid`]: exhaustive bracket checks over a parameter grid

pub mod brackets;
pub mod coeffsolver;
pub mod depth;
mod error;
pub mod expr;
pub mod grid;
pub mod identities;
pub mod linalg;
pub mod numkernel;
pub mod qseries;
pub mod ring;
pub mod spaces;
pub mod wz;

pub use error::{Error, Result};
pub use numkernel::Rational;
pub use qseries::QSeries;
pub use ring::{GradedPoly, Monomial, QuasiForm};
