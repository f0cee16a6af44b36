//! Dense univariate polynomials in `t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::{Rational, Ring};

/// Dense polynomial, coefficients indexed by power of `t`.
///
/// Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients and `degree()` returns `None` for it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(coeffs: Vec<R>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        Self::new(vec![R::zero(), R::one()])
    }

    /// `c * t^k`.
    pub fn monomial(c: R, k: usize) -> Self {
        let mut coeffs = vec![R::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `a + b t`.
    pub fn linear(a: R, b: R) -> Self {
        Self::new(vec![a, b])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `t^k`; zero beyond the degree.
    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * R::from_int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.scale(q)).collect())
    }

    pub fn mul_scalar(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `t^d p(1/t)` for a chosen formal degree `d >= deg p`.
    pub fn reversed(&self, d: usize) -> Self {
        assert!(
            self.degree().is_none_or(|deg| deg <= d),
            "reversal degree below polynomial degree"
        );
        let mut coeffs = vec![R::zero(); d + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[d - k] = c.clone();
        }
        Self::new(coeffs)
    }

    /// Substitute `t -> q(t)`.
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * q) + &Self::constant(c.clone()))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> UniPoly<S> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<R: Ring + fmt::Display> UniPoly<R> {
    /// Coefficient list, lowest degree first, each rendered with `Display`.
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl<R: Ring> Zero for UniPoly<R> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for UniPoly<R> {
    fn one() -> Self {
        Self { coeffs: vec![R::one()] }
    }
}

impl<R: Ring> Add<&UniPoly<R>> for &UniPoly<R> {
    type Output = UniPoly<R>;

    fn add(self, rhs: &UniPoly<R>) -> UniPoly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<R: Ring> Sub<&UniPoly<R>> for &UniPoly<R> {
    type Output = UniPoly<R>;

    fn sub(self, rhs: &UniPoly<R>) -> UniPoly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<R: Ring> Mul<&UniPoly<R>> for &UniPoly<R> {
    type Output = UniPoly<R>;

    fn mul(self, rhs: &UniPoly<R>) -> UniPoly<R> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let prod = a.clone() * b.clone();
                let slot = std::mem::replace(&mut coeffs[i + j], R::zero());
                coeffs[i + j] = slot + prod;
            }
        }
        UniPoly::new(coeffs)
    }
}

impl<R: Ring> Neg for &UniPoly<R> {
    type Output = UniPoly<R>;

    fn neg(self) -> UniPoly<R> {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<R: Ring> $tr for UniPoly<R> {
            type Output = UniPoly<R>;

            fn $m(self, rhs: UniPoly<R>) -> UniPoly<R> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<R: Ring> Neg for UniPoly<R> {
    type Output = UniPoly<R>;

    fn neg(self) -> UniPoly<R> {
        -&self
    }
}

/// Polynomials over a Q-algebra are themselves one; units are the
/// invertible constants.
impl<R: Ring> Ring for UniPoly<R> {
    fn unit_inverse(&self) -> Option<Self> {
        match self.degree() {
            Some(0) => self.coeffs[0].unit_inverse().map(Self::constant),
            _ => None,
        }
    }

    fn from_rational(q: &Rational) -> Self {
        Self::constant(R::from_rational(q))
    }

    fn scale(&self, q: &Rational) -> Self {
        UniPoly::scale(self, q)
    }
}

impl<R: Ring + fmt::Display> fmt::Display for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}
