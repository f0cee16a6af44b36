//! Exact computation of the cube-skeleton invariants `τ_{2m}^{(k)}`, their
//! leading coefficients `c_{n,m}^{(k)}` in the `e_{2m}` basis, the generating
//! polynomials built from them, and exact checks of the mean value property
//! on cube skeletons.
//!
//! The arithmetic core ([`exact`]) is generic over the coefficient ring; the
//! aliases below fix the exact rational instantiation used everywhere else.

pub mod bernoulli;
pub mod coefficients;
pub mod combinatorics;
pub mod error;
pub mod exact;
pub mod generating;
pub mod harmonics;
pub mod invariants;

pub use error::{Error, Result};
pub use exact::{Field, Ring};

/// Arbitrary-precision rational.
pub type Rational = exact::Rational;
/// Polynomial in `t` with rational coefficients.
pub type QPoly = exact::UniPoly<Rational>;
/// Truncated series in `z` with rational coefficients.
pub type QSeries = exact::Series<Rational>;
/// Truncated series in `z` whose coefficients are polynomials in `t`.
pub type TSeries = exact::Series<QPoly>;
/// Sparse polynomial in `x_1, ..., x_n` with rational coefficients.
pub type QMultiPoly = exact::MultiPoly<Rational>;
pub type RationalMatrix = exact::Matrix<Rational>;

/// Floating-point instantiations, for approximate evaluation.
pub type F64Poly = exact::UniPoly<f64>;
pub type F64MultiPoly = exact::MultiPoly<f64>;
