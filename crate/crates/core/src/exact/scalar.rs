//! Coefficient-ring abstraction shared by every polynomial and series type.
//!
//! All rings here are algebras over the rationals: a rational constant can
//! always be embedded, which is what lets truncated logarithms and
//! factorial-weighted sums stay generic.

use std::fmt::Debug;
use std::ops::{Div, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

/// A commutative ring containing the rationals.
pub trait Ring:
    Clone + Debug + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Send + Sync
{
    /// Multiplicative inverse, when `self` is a unit of the ring.
    fn unit_inverse(&self) -> Option<Self>;

    /// Image of a rational constant.
    fn from_rational(q: &Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn scale(&self, q: &Rational) -> Self {
        self.clone() * Self::from_rational(q)
    }
}

/// A ring in which every nonzero element is a unit.
pub trait Field: Ring + Div<Output = Self> {}

impl Ring for Rational {
    fn unit_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
}

impl Field for Rational {}

impl Ring for f64 {
    fn unit_inverse(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }

    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
}

impl Field for f64 {}

impl Ring for f32 {
    fn unit_inverse(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }

    fn from_rational(q: &Rational) -> Self {
        q.to_f32().unwrap_or(f32::NAN)
    }
}

impl Field for f32 {}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn big(p: impl Into<BigInt>) -> Rational {
    Rational::from_integer(p.into())
}

/// `(-1)^e` as a small integer.
pub fn sign_pow(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Canonical `"p/q"` form, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let q: Rational = s.parse().ok()?;
    // BigRational's parser rejects a zero denominator but accepts "-3/-4";
    // normalisation via `new` keeps the stored form canonical.
    Some(Rational::new(q.numer().clone(), q.denom().clone()))
}

pub fn is_positive(q: &Rational) -> bool {
    q.is_positive()
}

pub fn approx(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}
