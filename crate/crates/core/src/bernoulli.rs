//! Bernoulli numbers in the all-positive convention.
//!
//! Throughout this crate `B_m` (for `m >= 1`) denotes the positive number
//! defined by
//!
//! ```text
//! z / (e^z - 1) = 1 - z/2 + Σ_{m>=1} (-1)^(m-1) B_m z^(2m) / (2m)!
//! ```
//!
//! so `B_1 = 1/6`, `B_2 = 1/30`, `B_3 = 1/42`. In the usual convention these
//! are `|B_{2m}|`, i.e. `B_m = (-1)^(m-1) B_{2m}^{std}`. The scaled values
//! `b_m = 2^(2m-1) B_m / (2m)!` are the coefficients of
//! `z coth z = 1 + 2 Σ (-1)^(m-1) b_m z^(2m)`.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{binomial, factorial_q};
use crate::error::{Error, Result};
use crate::exact::scalar::{int, rat, sign_pow};
use crate::exact::{Rational, Series};

/// Grow-only cache of standard even-index Bernoulli numbers `B_0, B_2, B_4, ...`.
#[derive(Debug, Default)]
pub struct BernoulliCache {
    even: RwLock<Vec<Rational>>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        Self {
            even: RwLock::new(vec![Rational::one()]),
        }
    }

    /// Standard `B_{2j}`.
    fn standard_even(&self, j: usize) -> Rational {
        if let Some(v) = self.even.read().expect("cache poisoned").get(j) {
            return v.clone();
        }
        let mut even = self.even.write().expect("cache poisoned");
        if even.is_empty() {
            even.push(Rational::one());
        }
        // Σ_{j=0}^{N} C(N+1, j) B_j = 0 at N = 2i, with B_1 = -1/2 the only
        // nonzero odd value:  B_{2i} = 1/2 - (1/(2i+1)) Σ_{l<i} C(2i+1, 2l) B_{2l}
        while even.len() <= j {
            let i = even.len();
            let mut acc = Rational::zero();
            for (l, b) in even.iter().enumerate() {
                acc += Rational::from_integer(binomial(2 * i + 1, 2 * l)) * b;
            }
            let next = rat(1, 2) - acc / int((2 * i + 1) as i64);
            even.push(next);
        }
        even[j].clone()
    }

    pub fn bernoulli(&self, m: usize) -> Result<Rational> {
        if m == 0 {
            return Err(Error::domain("Bernoulli index must be at least 1"));
        }
        Ok(self.standard_even(m) * int(sign_pow(m - 1)))
    }

    pub fn scaled(&self, m: usize) -> Result<Rational> {
        let b = self.bernoulli(m)?;
        let two_pow = Rational::from_integer(BigInt::from(2).pow((2 * m - 1) as u32));
        Ok(two_pow * b / factorial_q(2 * m))
    }
}

fn cache() -> &'static BernoulliCache {
    static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
    CACHE.get_or_init(BernoulliCache::new)
}

/// `B_m` in the positive convention (`B_1 = 1/6`).
pub fn bernoulli_positive(m: usize) -> Result<Rational> {
    cache().bernoulli(m)
}

/// `b_m = 2^(2m-1) B_m / (2m)!`.
pub fn b_scaled(m: usize) -> Result<Rational> {
    cache().scaled(m)
}

/// `b_m` for an index already known to be valid.
pub(crate) fn b(m: usize) -> Rational {
    b_scaled(m).expect("index >= 1")
}

/// `z coth z` modulo `z^(order+1)`.
pub fn coth_series(order: usize) -> Series<Rational> {
    Series::from_fn(order, |j| {
        if j == 0 {
            Rational::one()
        } else if j % 2 == 1 {
            Rational::zero()
        } else {
            let m = j / 2;
            b(m) * int(2 * sign_pow(m - 1))
        }
    })
}

/// `tanh z` modulo `z^(order+1)`.
pub fn tanh_series(order: usize) -> Series<Rational> {
    Series::from_fn(order, |j| {
        if j % 2 == 0 {
            Rational::zero()
        } else {
            let m = j.div_ceil(2);
            let pow = Rational::from_integer((BigInt::one() << (2 * m)) - 1);
            b(m) * pow * int(2 * sign_pow(m - 1))
        }
    })
}
