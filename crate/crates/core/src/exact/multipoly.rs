//! Sparse multivariate polynomials with a graded-lexicographic term order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::scalar::{format_rational, parse_rational, Rational, Ring};
use crate::error::{Error, Result};

/// Exponent vector of a monomial.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of `x_1`, then `x_2`, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<R> {
    nvars: usize,
    terms: BTreeMap<Monomial, R>,
}

impl<R: Ring> MultiPoly<R> {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, R::one())
    }

    /// The coordinate `x_i` (zero-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(Monomial(e), R::one())
    }

    pub fn monomial(m: Monomial, c: R) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, R)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeff_of(&self, exps: &[u32]) -> R {
        self.coeff(&Monomial(exps.to_vec()))
    }

    pub fn add_term(&mut self, m: Monomial, c: R) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// In-place `self += other`.
    pub fn absorb(&mut self, other: Self) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        for (m, c) in other.terms {
            self.add_term(m, c);
        }
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        self.map_coeffs(|c| c.scale(q))
    }

    pub fn mul_scalar(&self, s: &R) -> Self {
        self.map_coeffs(|c| c.clone() * s.clone())
    }

    fn map_coeffs(&self, f: impl Fn(&R) -> R) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.nvars);
        for _ in 0..e {
            result = &result * self;
        }
        result
    }

    pub fn eval(&self, point: &[R]) -> R {
        assert_eq!(point.len(), self.nvars);
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                for _ in 0..e {
                    v = v * x.clone();
                }
            }
            acc = acc + v;
        }
        acc
    }

    /// Substitute `x_i -> images[i]`; all images share one variable count.
    pub fn substitute(&self, images: &[MultiPoly<R>]) -> MultiPoly<R> {
        assert_eq!(images.len(), self.nvars, "one image per variable required");
        let target = images.first().map_or(0, |g| g.nvars);
        // powers[i][e] = images[i]^e, grown on demand
        let mut powers: Vec<Vec<MultiPoly<R>>> =
            images.iter().map(|_| vec![MultiPoly::one(target)]).collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    term = &term * &powers[i][e];
                }
            }
            out.absorb(term);
        }
        out
    }

    /// `x -> (x_{perm[0]}, ..., x_{perm[n-1]})`, i.e. `x_i` is replaced by `x_{perm[i]}`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; self.nvars];
            for (i, &a) in m.exps().iter().enumerate() {
                e[perm[i]] += a;
            }
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// `x_i -> -x_i` wherever `negate[i]` is set.
    pub fn flip_signs(&self, negate: &[bool]) -> Self {
        assert_eq!(negate.len(), self.nvars);
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let odd = m
                .exps()
                .iter()
                .zip(negate)
                .filter(|(&e, &neg)| neg && e % 2 == 1)
                .count();
            let c = if odd % 2 == 1 { -c.clone() } else { c.clone() };
            p.add_term(m.clone(), c);
        }
        p
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            p.add_term(Monomial(exps), c.clone() * R::from_int(e as i64));
        }
        p
    }

    /// `∂^alpha f`.
    pub fn partial_multi(&self, alpha: &[u32]) -> Self {
        assert_eq!(alpha.len(), self.nvars);
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.exps().iter().zip(alpha).any(|(e, a)| e < a) {
                continue;
            }
            let mut factor: i64 = 1;
            let mut exps = m.0.clone();
            for (e, &a) in exps.iter_mut().zip(alpha) {
                for j in 0..a {
                    factor *= (*e - j) as i64;
                }
                *e -= a;
            }
            p.add_term(Monomial(exps), c.clone() * R::from_int(factor));
        }
        p
    }

    /// Apply the constant-coefficient operator `self(∂)` to `f`.
    pub fn apply_as_operator(&self, f: &Self) -> Self {
        assert_eq!(self.nvars, f.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.absorb(f.partial_multi(m.exps()).mul_scalar(c));
        }
        out
    }

    /// Re-embed into `nvars` variables; `slots[i]` is the new index of `x_i`.
    pub fn embed(&self, nvars: usize, slots: &[usize]) -> Self {
        assert_eq!(slots.len(), self.nvars);
        let mut p = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &a) in m.exps().iter().enumerate() {
                e[slots[i]] += a;
            }
            p.add_term(Monomial(e), c.clone());
        }
        p
    }
}

/// One serialized term: exponent vector and `"p/q"` coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedTerm(pub Vec<u32>, pub String);

impl MultiPoly<Rational> {
    /// Terms in canonical order (descending graded-lex), coefficients as `"p/q"`.
    pub fn canonical_terms(&self) -> Vec<SerializedTerm> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| SerializedTerm(m.0.clone(), format_rational(c)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.canonical_terms()).expect("term list serializes")
    }

    /// Parses the canonical term list; `nvars` is inferred from the first
    /// term unless given.
    pub fn from_json(text: &str, nvars: Option<usize>) -> Result<Self> {
        let terms: Vec<SerializedTerm> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = nvars
            .or_else(|| terms.first().map(|t| t.0.len()))
            .ok_or_else(|| Error::Parse("empty polynomial needs an explicit variable count".into()))?;
        let mut p = Self::zero(n);
        for SerializedTerm(e, c) in terms {
            if e.len() != n {
                return Err(Error::Parse(format!(
                    "exponent vector of length {} in a {n}-variable polynomial",
                    e.len()
                )));
            }
            let c = parse_rational(&c).ok_or_else(|| Error::Parse(format!("bad coefficient {c:?}")))?;
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }
}

impl<R: Ring> Add<&MultiPoly<R>> for &MultiPoly<R> {
    type Output = MultiPoly<R>;

    fn add(self, rhs: &MultiPoly<R>) -> MultiPoly<R> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<R: Ring> Sub<&MultiPoly<R>> for &MultiPoly<R> {
    type Output = MultiPoly<R>;

    fn sub(self, rhs: &MultiPoly<R>) -> MultiPoly<R> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<R: Ring> Mul<&MultiPoly<R>> for &MultiPoly<R> {
    type Output = MultiPoly<R>;

    fn mul(self, rhs: &MultiPoly<R>) -> MultiPoly<R> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.add_term(ma.mul(mb), a.clone() * b.clone());
            }
        }
        out
    }
}

impl<R: Ring> Neg for &MultiPoly<R> {
    type Output = MultiPoly<R>;

    fn neg(self) -> MultiPoly<R> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<R: Ring + fmt::Display> fmt::Display for MultiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{e}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{int, rat};
    use proptest::prelude::*;

    type P = MultiPoly<Rational>;

    fn x(n: usize, i: usize) -> P {
        P::var(n, i)
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::new(vec![1, 1]);
        let b = Monomial::new(vec![2, 0]);
        let c = Monomial::new(vec![0, 3]);
        assert!(a < b);
        assert!(b < c);
        let p = &(&x(2, 0) * &x(2, 1)) + &(&x(2, 0).pow(2) + &x(2, 1).pow(3));
        let order: Vec<Vec<u32>> = p.canonical_terms().into_iter().map(|t| t.0).collect();
        assert_eq!(order, vec![vec![0, 3], vec![2, 0], vec![1, 1]]);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = &x(2, 0) - &x(2, 0);
        assert!(p.is_zero());
        assert_eq!(p.total_degree(), None);
    }

    #[test]
    fn substitution_and_derivatives() {
        // (x1 + x2)^2 via substitution into t1^2
        let t1sq = P::var(1, 0).pow(2);
        let s = t1sq.substitute(&[&x(2, 0) + &x(2, 1)]);
        assert_eq!(s.coeff_of(&[1, 1]), int(2));
        assert_eq!(s.partial(0), (&x(2, 0) + &x(2, 1)).scale(&int(2)));
        let cubic = x(2, 0).pow(3);
        assert_eq!(cubic.partial_multi(&[2, 0]), x(2, 0).scale(&int(6)));
        assert!(cubic.partial_multi(&[0, 1]).is_zero());
    }

    #[test]
    fn operator_application() {
        // (∂1^2 + ∂2^2)(x1^3 x2 - x1 x2^3) = 6x1x2 - 6x1x2 = 0
        let delta = &(&x(2, 0).pow(3) * &x(2, 1)) - &(&x(2, 0) * &x(2, 1).pow(3));
        let lap = &x(2, 0).pow(2) + &x(2, 1).pow(2);
        assert!(lap.apply_as_operator(&delta).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let p = &x(2, 0).pow(2).scale(&rat(2, 3)) - &x(2, 1);
        let js = p.to_json();
        assert_eq!(js, r#"[[[2,0],"2/3"],[[0,1],"-1"]]"#);
        assert_eq!(P::from_json(&js, None).unwrap(), p);
        assert!(P::from_json("[[[1],\"1/0\"]]", None).is_err());
        assert!(P::from_json("[[[1,2],\"1\"],[[1],\"1\"]]", None).is_err());
        assert_eq!(P::from_json("[]", Some(3)).unwrap(), P::zero(3));
    }

    #[test]
    fn sign_flip_and_permutation() {
        let p = &(&x(2, 0).pow(3) * &x(2, 1)) + &x(2, 1).pow(2);
        let f = p.flip_signs(&[true, false]);
        assert_eq!(f.coeff_of(&[3, 1]), int(-1));
        assert_eq!(f.coeff_of(&[0, 2]), int(1));
        let s = p.permute_vars(&[1, 0]);
        assert_eq!(s.coeff_of(&[1, 3]), int(1));
        assert_eq!(s.coeff_of(&[2, 0]), int(1));
    }

    fn small_poly() -> impl Strategy<Value = P> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..=5), 0..5).prop_map(|ts| {
            P::from_terms(3, ts.into_iter().map(|((a, b, c), k)| (vec![a, b, c], int(k))))
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn serialization_is_canonical(a in small_poly(), b in small_poly()) {
            // same polynomial built in two different orders serializes identically
            let s1 = (&a + &b).to_json();
            let s2 = (&b + &a).to_json();
            prop_assert_eq!(&s1, &s2);
            prop_assert_eq!(P::from_json(&s1, Some(3)).unwrap(), &a + &b);
        }
    }
}
