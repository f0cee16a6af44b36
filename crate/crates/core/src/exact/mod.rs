//! Exact arithmetic: rationals, univariate and multivariate polynomials,
//! truncated power series and linear algebra, all generic over the
//! coefficient ring.

pub mod matrix;
pub mod multipoly;
pub mod scalar;
pub mod series;
pub mod unipoly;

pub use matrix::{EchelonBasis, Matrix, SolveOutcome};
pub use multipoly::{Monomial, MultiPoly, SerializedTerm};
pub use scalar::{Field, Rational, Ring};
pub use series::{series_div, series_log, Series};
pub use unipoly::UniPoly;
