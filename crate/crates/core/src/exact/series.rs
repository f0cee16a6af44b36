//! Truncated power series in `z` over an arbitrary coefficient ring.

use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{rat, Rational, Ring};
use crate::error::{Error, Result};

/// A power series known modulo `z^(order+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Series<R> {
    /// Builds a series of the given order; missing coefficients are zero and
    /// surplus ones are dropped.
    pub fn new(order: usize, mut coeffs: Vec<R>) -> Self {
        coeffs.resize(order + 1, R::zero());
        Self { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> R) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn one(order: usize) -> Self {
        Self::new(order, vec![R::one()])
    }

    /// `c z^k`, zero when `k` exceeds the order.
    pub fn monomial(order: usize, c: R, k: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.scale(q)).collect(),
        }
    }

    pub fn mul_scalar(&self, c: &R) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Multiply by `z^k`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let order = self.order();
        Self::from_fn(order, |j| {
            if j >= k {
                self.coeffs[j - k].clone()
            } else {
                R::zero()
            }
        })
    }

    /// Divide by `z^k`. The low coefficients must vanish; the order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::domain("shift exceeds series order"));
        }
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(Error::domain("series not divisible by the requested power of z"));
        }
        Ok(Self {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// `d/dz`; the result is known to one order less.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_fn(self.order() - 1, |j| {
            self.coeffs[j + 1].clone() * R::from_int((j + 1) as i64)
        })
    }

    /// `z d/dz`, which keeps the order.
    pub fn euler(&self) -> Self {
        Self::from_fn(self.order(), |j| self.coeffs[j].clone() * R::from_int(j as i64))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Series<S> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// First index where the two series differ, compared up to the smaller order.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let order = self.order().min(other.order());
        (0..=order).find(|&j| self.coeffs[j] != other.coeffs[j])
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::domain("exp requires a zero constant term"));
        }
        let order = self.order();
        let mut e: Vec<R> = Vec::with_capacity(order + 1);
        e.push(R::one());
        // j E_j = sum_{i=1}^{j} i L_i E_{j-i}
        for j in 1..=order {
            let mut acc = R::zero();
            for i in 1..=j {
                if self.coeffs[i].is_zero() {
                    continue;
                }
                acc = acc + self.coeffs[i].clone() * R::from_int(i as i64) * e[j - i].clone();
            }
            e.push(acc.scale(&rat(1, j as i64)));
        }
        Ok(Self { coeffs: e })
    }
}

/// `log(s)` truncated at `order` (or the order of `s`, if smaller).
pub fn series_log<R: Ring>(s: &Series<R>, order: usize) -> Result<Series<R>> {
    if s.coeffs[0] != R::one() {
        return Err(Error::domain("series_log requires constant term 1"));
    }
    let order = order.min(s.order());
    let mut l: Vec<R> = vec![R::zero(); order + 1];
    // s L' = s'  =>  j L_j = j s_j - sum_{i=1}^{j-1} i L_i s_{j-i}
    for j in 1..=order {
        let mut acc = s.coeffs[j].clone() * R::from_int(j as i64);
        for (i, li) in l.iter().enumerate().take(j).skip(1) {
            if li.is_zero() || s.coeffs[j - i].is_zero() {
                continue;
            }
            acc = acc - li.clone() * R::from_int(i as i64) * s.coeffs[j - i].clone();
        }
        l[j] = acc.scale(&rat(1, j as i64));
    }
    Ok(Series { coeffs: l })
}

/// The quotient `q` with `q b = a` modulo `z^(order+1)`.
pub fn series_div<R: Ring>(a: &Series<R>, b: &Series<R>, order: usize) -> Result<Series<R>> {
    let inv = b.coeffs[0]
        .unit_inverse()
        .ok_or_else(|| Error::domain("series_div: constant term of divisor is not invertible"))?;
    let order = order.min(a.order()).min(b.order());
    let mut q: Vec<R> = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut acc = a.coeffs[j].clone();
        for i in 1..=j {
            if b.coeffs[i].is_zero() {
                continue;
            }
            acc = acc - b.coeffs[i].clone() * q[j - i].clone();
        }
        q.push(acc * inv.clone());
    }
    Ok(Series { coeffs: q })
}

impl<R: Ring> Add<&Series<R>> for &Series<R> {
    type Output = Series<R>;

    fn add(self, rhs: &Series<R>) -> Series<R> {
        let order = self.order().min(rhs.order());
        Series::from_fn(order, |j| self.coeffs[j].clone() + rhs.coeffs[j].clone())
    }
}

impl<R: Ring> Sub<&Series<R>> for &Series<R> {
    type Output = Series<R>;

    fn sub(self, rhs: &Series<R>) -> Series<R> {
        let order = self.order().min(rhs.order());
        Series::from_fn(order, |j| self.coeffs[j].clone() - rhs.coeffs[j].clone())
    }
}

impl<R: Ring> Mul<&Series<R>> for &Series<R> {
    type Output = Series<R>;

    fn mul(self, rhs: &Series<R>) -> Series<R> {
        let order = self.order().min(rhs.order());
        let mut out = vec![R::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                let slot = std::mem::replace(&mut out[i + j], R::zero());
                out[i + j] = slot + a.clone() * b.clone();
            }
        }
        Series { coeffs: out }
    }
}

impl<R: Ring> Neg for &Series<R> {
    type Output = Series<R>;

    fn neg(self) -> Series<R> {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::int;
    use crate::exact::unipoly::UniPoly;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    type QS = Series<Rational>;

    fn qs(order: usize, cs: &[(i64, i64)]) -> QS {
        QS::new(order, cs.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    /// 1 + z^2/2 + z^4/24 (cosh truncated)
    fn cosh4() -> QS {
        qs(4, &[(1, 1), (0, 1), (1, 2), (0, 1), (1, 24)])
    }

    #[test]
    fn log_of_one_plus_z() {
        let s = qs(3, &[(1, 1), (1, 1)]);
        assert_eq!(
            series_log(&s, 3).unwrap(),
            qs(3, &[(0, 1), (1, 1), (-1, 2), (1, 3)])
        );
    }

    #[test]
    fn log_of_cosh() {
        // Oracle: log(1+u) = u - u^2/2 + ..., u = z^2/2 + z^4/24, so to z^4:
        // z^2/2 + z^4/24 - (z^4/4)/2 = z^2/2 - z^4/12.
        let u = &cosh4() - &QS::one(4);
        let u2 = &u * &u;
        let oracle = &u - &u2.scale(&rat(1, 2));
        assert_eq!(oracle, qs(4, &[(0, 1), (0, 1), (1, 2), (0, 1), (-1, 12)]));
        assert_eq!(series_log(&cosh4(), 4).unwrap(), oracle);
    }

    #[test]
    fn log_of_one_is_zero() {
        for order in [0, 3, 9] {
            assert_eq!(series_log(&QS::one(order), order).unwrap(), QS::zero(order));
        }
    }

    #[test]
    fn log_rejects_bad_constant() {
        assert!(series_log(&qs(3, &[(2, 1), (1, 1)]), 3).is_err());
    }

    #[test]
    fn geometric_division() {
        let a = QS::monomial(6, int(1), 2);
        let b = qs(6, &[(1, 1), (0, 1), (-1, 1)]);
        assert_eq!(
            series_div(&a, &b, 6).unwrap(),
            qs(6, &[(0, 1), (0, 1), (1, 1), (0, 1), (1, 1), (0, 1), (1, 1)])
        );
    }

    #[test]
    fn geometric_division_over_polynomials() {
        type P = UniPoly<Rational>;
        let one = Series::<P>::one(4);
        let b = &one + &Series::monomial(4, P::t(), 2);
        let q = series_div(&one, &b, 4).unwrap();
        let expected = Series::new(
            4,
            vec![P::one(), P::zero(), -P::t(), P::zero(), P::t().pow(2)],
        );
        assert_eq!(q, expected);
    }

    #[test]
    fn division_rejects_non_unit_constant() {
        type P = UniPoly<Rational>;
        let a = Series::<P>::one(2);
        let b = Series::new(2, vec![P::linear(int(1), int(1))]);
        assert!(matches!(series_div(&a, &b, 2), Err(Error::Domain(_))));
        assert!(series_div(&qs(2, &[(1, 1)]), &qs(2, &[(0, 1), (1, 1)]), 2).is_err());
    }

    #[test]
    fn shifts_and_derivatives() {
        let s = qs(4, &[(0, 1), (0, 1), (3, 1), (0, 1), (5, 1)]);
        assert_eq!(s.shift_down(2).unwrap(), qs(2, &[(3, 1), (0, 1), (5, 1)]));
        assert!(s.shift_down(3).is_err());
        assert_eq!(s.derivative(), qs(3, &[(0, 1), (6, 1), (0, 1), (20, 1)]));
        assert_eq!(s.euler(), qs(4, &[(0, 1), (0, 1), (6, 1), (0, 1), (20, 1)]));
        assert_eq!(s.shift_up(1).coeff(3), &int(3));
    }

    fn small_series(order: usize) -> impl Strategy<Value = QS> {
        proptest::collection::vec((-9i64..=9, 1i64..=5), order).prop_map(move |cs| {
            let mut v = vec![Rational::one()];
            v.extend(cs.into_iter().map(|(p, q)| rat(p, q)));
            QS::new(order, v)
        })
    }

    proptest! {
        #[test]
        fn log_then_exp_round_trips(s in small_series(8)) {
            let l = series_log(&s, 8).unwrap();
            prop_assert_eq!(l.exp().unwrap(), s);
        }

        #[test]
        fn division_inverts_multiplication(a in small_series(7), b in small_series(7)) {
            let q = series_div(&a, &b, 7).unwrap();
            prop_assert_eq!(&q * &b, a);
        }
    }
}
