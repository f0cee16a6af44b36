//! The invariant polynomials of the cube skeletons, built symbolically.
//!
//! For the `k`-skeleton of the cube `[-1,1]^n`:
//!
//! * `h_m^{(k)}(x) = H_m(x_1+…+x_n, x_2+…+x_n, …, x_{k+1}+…+x_n)`, with `H_m`
//!   the complete symmetric polynomial (the last argument is zero when `k = n`);
//! * `g_m^{(k)}` is its average over sign changes of the coordinates;
//! * `τ_m^{(k)}` is its average over the full hyperoctahedral group `W_n`.
//!
//! [`expand_in_invariant_basis`] writes `τ_{2m}^{(k)}` in the basis of
//! elementary symmetric polynomials of the squares and extracts the leading
//! coefficient `c_{n,m}^{(k)}` directly from that definition.

use std::collections::BTreeMap;
use std::env;

use num_traits::Zero;

use crate::combinatorics::{enum_matrices_even, enum_ordered_partitions, enum_young, factorial};
use crate::error::{Error, Result};
use crate::exact::{Matrix, Monomial, MultiPoly, Ring};
use crate::{QMultiPoly, Rational};

/// Environment variable overriding [`TermBudget::default`].
pub const TERM_BUDGET_ENV: &str = "CUBEHARM_TERM_BUDGET";

/// Upper bound on the number of enumerated matrices or stored terms a single
/// symbolic expansion may touch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TermBudget(pub usize);

impl TermBudget {
    pub const DEFAULT: usize = 2_000_000;

    pub fn unlimited() -> Self {
        TermBudget(usize::MAX)
    }

    /// The default, or the value of `CUBEHARM_TERM_BUDGET` when set and valid.
    pub fn from_env() -> Self {
        env::var(TERM_BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(TermBudget)
            .unwrap_or_default()
    }

    fn check(&self, needed: usize) -> Result<()> {
        if needed > self.0 {
            Err(Error::Budget {
                needed,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for TermBudget {
    fn default() -> Self {
        TermBudget(Self::DEFAULT)
    }
}

/// `H_m(args)`: the sum over ordered partitions `(m_1..m_j)` of `m` of
/// `args_1^{m_1} ⋯ args_j^{m_j}`.
pub fn complete_symmetric<R: Ring>(m: u32, args: &[MultiPoly<R>]) -> Result<MultiPoly<R>> {
    let Some(first) = args.first() else {
        return Err(Error::domain("complete_symmetric needs at least one argument"));
    };
    let nvars = first.nvars();
    // powers[i][e] = args[i]^e
    let powers: Vec<Vec<MultiPoly<R>>> = args
        .iter()
        .map(|a| {
            let mut v = vec![MultiPoly::one(nvars)];
            for e in 1..=m as usize {
                let next = &v[e - 1] * a;
                v.push(next);
            }
            v
        })
        .collect();
    let mut out = MultiPoly::zero(nvars);
    for part in enum_ordered_partitions(m, args.len()) {
        let mut term = MultiPoly::one(nvars);
        for (i, &e) in part.parts().iter().enumerate() {
            if e > 0 {
                term = &term * &powers[i][e as usize];
            }
        }
        out.absorb(term);
    }
    Ok(out)
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("dimension n must be at least 1"));
    }
    if k > n {
        return Err(Error::domain(format!("skeleton dimension k = {k} exceeds n = {n}")));
    }
    Ok(())
}

/// The tail sums `x_i + … + x_n` for `i = 1..=k+1` (zero-based `i = 0..=k`).
fn tail_sums(n: usize, k: usize) -> Vec<QMultiPoly> {
    (0..=k)
        .map(|i| {
            let mut p = QMultiPoly::zero(n);
            for j in i..n {
                p.absorb(QMultiPoly::var(n, j));
            }
            p
        })
        .collect()
}

/// `h_m^{(k)}` in `n` variables.
pub fn h_poly(n: usize, k: usize, m: u32) -> Result<QMultiPoly> {
    check_nk(n, k)?;
    complete_symmetric(m, &tail_sums(n, k))
}

/// `g_m^{(k)}`, the sign-change average of `h_m^{(k)}`, computed as the sum
/// over upper quadrilateral matrices with even column sums of
/// `(A1)!/A! · x^{eA}`.
pub fn g_poly(n: usize, k: usize, m: u32) -> Result<QMultiPoly> {
    g_poly_with_budget(n, k, m, TermBudget::unlimited())
}

pub fn g_poly_with_budget(n: usize, k: usize, m: u32, budget: TermBudget) -> Result<QMultiPoly> {
    check_nk(n, k)?;
    let mut out = QMultiPoly::zero(n);
    if m % 2 == 1 {
        return Ok(out);
    }
    // accumulate integer coefficients per exponent vector before building rationals
    let mut acc: BTreeMap<Vec<u32>, num_bigint::BigInt> = BTreeMap::new();
    for (seen, a) in enum_matrices_even(n, k, m)?.enumerate() {
        budget.check(seen + 1)?;
        *acc.entry(a.col_sums()).or_default() += a.factorial_ratio();
    }
    for (e, c) in acc {
        out.add_term(Monomial::new(e), Rational::from_integer(c));
    }
    Ok(out)
}

/// Distinct permutations of `exps`, each exactly once.
pub(crate) fn distinct_permutations(exps: &[u32]) -> Vec<Vec<u32>> {
    let mut v = exps.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    // lexicographic next_permutation
    while let Some(i) = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) {
        let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("successor exists");
        v.swap(i, j);
        v[i + 1..].reverse();
        out.push(v.clone());
    }
    out
}

fn orbit_size(sorted: &[u32]) -> Rational {
    let mut size = factorial(sorted.len());
    let mut run = 1usize;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            size /= factorial(run);
            run = 1;
        }
    }
    size /= factorial(run);
    Rational::from_integer(size)
}

/// The average of `p` over all permutations of its variables, computed one
/// monomial orbit at a time.
pub fn symmetrize(p: &QMultiPoly) -> QMultiPoly {
    let n = p.nvars();
    let mut orbit_sums: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut key = m.exps().to_vec();
        key.sort_unstable();
        *orbit_sums.entry(key).or_insert_with(Rational::zero) += c;
    }
    let mut out = QMultiPoly::zero(n);
    for (key, sum) in orbit_sums {
        let c = sum / orbit_size(&key);
        for e in distinct_permutations(&key) {
            out.add_term(Monomial::new(e), c.clone());
        }
    }
    out
}

/// `τ_degree^{(k)}`, the `W_n`-average of `h_degree^{(k)}`; zero for odd degree.
pub fn tau_poly(n: usize, k: usize, degree: u32) -> Result<QMultiPoly> {
    tau_poly_with_budget(n, k, degree, TermBudget::unlimited())
}

pub fn tau_poly_with_budget(n: usize, k: usize, degree: u32, budget: TermBudget) -> Result<QMultiPoly> {
    let g = g_poly_with_budget(n, k, degree, budget)?;
    Ok(symmetrize(&g))
}

/// `e_{2m}(x)`: the `m`-th elementary symmetric polynomial of the squares.
pub fn elementary_symmetric_sq(n: usize, m: usize) -> Result<QMultiPoly> {
    if m > n {
        return Err(Error::domain(format!("e_{{2m}} needs m <= n (m = {m}, n = {n})")));
    }
    let mut key = vec![0u32; n];
    for e in key.iter_mut().take(m) {
        *e = 2;
    }
    let mut out = QMultiPoly::zero(n);
    for e in distinct_permutations(&key) {
        out.add_term(Monomial::new(e), Rational::from_integer(1.into()));
    }
    Ok(out)
}

/// The fundamental alternating polynomial `x_1⋯x_n ∏_{i<j} (x_i² − x_j²)`.
pub fn delta_poly(n: usize) -> Result<QMultiPoly> {
    if n == 0 {
        return Err(Error::domain("dimension n must be at least 1"));
    }
    let x = |i| QMultiPoly::var(n, i);
    let mut p = QMultiPoly::one(n);
    for i in 0..n {
        p = &p * &x(i);
    }
    for i in 0..n {
        for j in i + 1..n {
            p = &p * &(&x(i).pow(2) - &x(j).pow(2));
        }
    }
    Ok(p)
}

/// `τ_{2m}^{(k)} = c · e_{2m} + P(e_2, …, e_{2m-2})`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantExpansion {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// `c_{n,m}^{(k)}`.
    pub leading: Rational,
    /// Coefficients of `P`, keyed by `(a_1, …, a_{m-1})`, the monomial
    /// `e_2^{a_1} ⋯ e_{2m-2}^{a_{m-1}}`.
    pub lower_terms: BTreeMap<Vec<u32>, Rational>,
}

fn e_product(n: usize, exps: &[u32]) -> Result<QMultiPoly> {
    let mut p = QMultiPoly::one(n);
    for (i, &a) in exps.iter().enumerate() {
        if a > 0 {
            p = &p * &elementary_symmetric_sq(n, i + 1)?.pow(a);
        }
    }
    Ok(p)
}

impl InvariantExpansion {
    /// Rebuilds `c e_{2m} + P(e_2, …)` as a polynomial in `x`.
    pub fn reconstruct(&self) -> Result<QMultiPoly> {
        let mut out = elementary_symmetric_sq(self.n, self.m)?.mul_scalar(&self.leading);
        for (exps, c) in &self.lower_terms {
            out.absorb(e_product(self.n, exps)?.mul_scalar(c));
        }
        Ok(out)
    }
}

/// Solves for the coefficients of `τ_{2m}^{(k)}` on all weighted
/// e-monomials of weight `2m` in monomial coordinates.
pub fn expand_in_invariant_basis(n: usize, m: usize, k: usize) -> Result<InvariantExpansion> {
    expand_in_invariant_basis_with_budget(n, m, k, TermBudget::default())
}

pub fn expand_in_invariant_basis_with_budget(
    n: usize,
    m: usize,
    k: usize,
    budget: TermBudget,
) -> Result<InvariantExpansion> {
    check_nk(n, k)?;
    if m == 0 || m > n {
        return Err(Error::domain(format!("need 1 <= m <= n (m = {m}, n = {n})")));
    }
    let tau = tau_poly_with_budget(n, k, 2 * m as u32, budget)?;

    // one unknown per partition μ of m: exponent of e_{2i} = multiplicity of i
    let basis: Vec<Vec<u32>> = enum_young(m as u32, m)
        .map(|mu| {
            let mut a = vec![0u32; m];
            for &p in mu.parts() {
                a[p as usize - 1] += 1;
            }
            a
        })
        .collect();
    let products: Vec<QMultiPoly> = basis
        .iter()
        .map(|a| e_product(n, a))
        .collect::<Result<_>>()?;

    let mut monomials: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in products.iter().chain(std::iter::once(&tau)) {
        for (mono, _) in p.terms() {
            let next = monomials.len();
            monomials.entry(mono.clone()).or_insert(next);
        }
    }
    budget.check(monomials.len() * basis.len())?;

    let mut system = Matrix::<Rational>::zeros(monomials.len(), basis.len());
    for (col, p) in products.iter().enumerate() {
        for (mono, c) in p.terms() {
            system.set(monomials[mono], col, c.clone());
        }
    }
    let mut rhs = vec![Rational::zero(); monomials.len()];
    for (mono, c) in tau.terms() {
        rhs[monomials[mono]] = c.clone();
    }
    let solution = system.solve(&rhs).map_err(|e| {
        Error::invariant(format!(
            "e-basis system for (n, m, k) = ({n}, {m}, {k}) has no unique solution: {e}"
        ))
    })?;

    let mut leading = Rational::zero();
    let mut lower_terms = BTreeMap::new();
    for (a, c) in basis.into_iter().zip(solution) {
        if a[m - 1] == 1 {
            leading = c;
        } else if !c.is_zero() {
            lower_terms.insert(a[..m - 1].to_vec(), c);
        }
    }
    Ok(InvariantExpansion {
        n,
        m,
        k,
        leading,
        lower_terms,
    })
}

/// Literal average of `p` over all `2^n · n!` signed permutations. Test and
/// verification use only: the cost is factorial in `n`.
pub fn hyperoctahedral_average(p: &QMultiPoly) -> QMultiPoly {
    let n = p.nvars();
    let perms = distinct_permutations(&(0..n as u32).collect::<Vec<_>>());
    let mut out = QMultiPoly::zero(n);
    let mut count = 0i64;
    for perm in &perms {
        let perm: Vec<usize> = perm.iter().map(|&i| i as usize).collect();
        let q = p.permute_vars(&perm);
        for mask in 0..(1u32 << n) {
            let negate: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            out.absorb(q.flip_signs(&negate));
            count += 1;
        }
    }
    out.scale(&Rational::new(1.into(), count.into()))
}

/// Literal average of `p` over the `2^n` sign changes.
pub fn sign_average(p: &QMultiPoly) -> QMultiPoly {
    let n = p.nvars();
    let mut out = QMultiPoly::zero(n);
    for mask in 0..(1u32 << n) {
        let negate: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        out.absorb(p.flip_signs(&negate));
    }
    out.scale(&Rational::new(1.into(), (1i64 << n).into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enum_matrices_total;
    use crate::exact::scalar::{int, rat};

    fn times(p: &QMultiPoly, c: i64) -> QMultiPoly {
        p.scale(&int(c))
    }

    fn x(n: usize, i: usize) -> QMultiPoly {
        QMultiPoly::var(n, i)
    }

    #[test]
    fn complete_symmetric_basics() {
        let t = |i| QMultiPoly::var(2, i);
        let h2 = complete_symmetric(2, &[t(0), t(1)]).unwrap();
        let expected = &(&t(0).pow(2) + &(&t(0) * &t(1))) + &t(1).pow(2);
        assert_eq!(h2, expected);
        let single = complete_symmetric(4, &[&t(0) + &t(1)]).unwrap();
        assert_eq!(single, (&t(0) + &t(1)).pow(4));
        assert!(complete_symmetric::<Rational>(2, &[]).is_err());
    }

    #[test]
    fn complete_symmetric_with_null_argument() {
        let n = 3;
        let args: Vec<QMultiPoly> = (0..n).map(|i| x(n, i)).collect();
        for m in 0..4 {
            let mut padded = args.clone();
            padded.push(QMultiPoly::zero(n));
            assert_eq!(
                complete_symmetric(m, &padded).unwrap(),
                complete_symmetric(m, &args).unwrap()
            );
        }
    }

    #[test]
    fn h_examples() {
        let s = &x(2, 0) + &x(2, 1);
        assert_eq!(h_poly(2, 0, 2).unwrap(), s.pow(2));
        let expected = &(&s.pow(2) + &(&s * &x(2, 1))) + &x(2, 1).pow(2);
        assert_eq!(h_poly(2, 1, 2).unwrap(), expected);
        for m in 0..5 {
            assert_eq!(h_poly(1, 1, m).unwrap(), h_poly(1, 0, m).unwrap());
            assert_eq!(h_poly(3, 3, m).unwrap(), h_poly(3, 2, m).unwrap());
        }
        assert!(h_poly(2, 3, 1).is_err());
    }

    #[test]
    fn h_matches_matrix_sum() {
        for n in 1..=3usize {
            for k in 0..=n {
                for m in 0..=4u32 {
                    let mut by_matrices = QMultiPoly::zero(n);
                    for a in enum_matrices_total(n, k, m) {
                        by_matrices.add_term(
                            Monomial::new(a.col_sums()),
                            Rational::from_integer(a.factorial_ratio()),
                        );
                    }
                    assert_eq!(h_poly(n, k, m).unwrap(), by_matrices, "n={n} k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn g_examples() {
        let expected = &x(2, 0).pow(2) + &times(&x(2, 1).pow(2), 3);
        assert_eq!(g_poly(2, 1, 2).unwrap(), expected);
        assert_eq!(g_poly(1, 0, 2).unwrap(), x(1, 0).pow(2));
        for (n, k) in [(1, 0), (2, 1), (3, 3)] {
            for m in [1, 3, 5] {
                assert!(g_poly(n, k, m).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn g_matches_sign_average() {
        for n in 1..=3usize {
            for k in 0..=n {
                for m in 0..=4u32 {
                    let h = h_poly(n, k, m).unwrap();
                    assert_eq!(g_poly(n, k, m).unwrap(), sign_average(&h), "n={n} k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn tau_examples() {
        let e2 = &x(2, 0).pow(2) + &x(2, 1).pow(2);
        assert_eq!(tau_poly(2, 1, 2).unwrap(), times(&e2, 2));
        assert_eq!(tau_poly(2, 0, 2).unwrap(), e2);
        for n in 1..=3 {
            for d in 0..=6 {
                assert_eq!(tau_poly(n, n, d).unwrap(), tau_poly(n, n - 1, d).unwrap());
            }
        }
    }

    #[test]
    fn tau_matches_full_group_average() {
        for n in 1..=3usize {
            for k in 0..=n {
                for d in 0..=6u32 {
                    let h = h_poly(n, k, d).unwrap();
                    assert_eq!(
                        tau_poly(n, k, d).unwrap(),
                        hyperoctahedral_average(&h),
                        "n={n} k={k} degree={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn odd_degree_tau_vanishes() {
        for n in 1..=3usize {
            for k in 0..=n {
                for d in [1u32, 3, 5, 7] {
                    assert!(tau_poly(n, k, d).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_symmetric_sq(2, 1).unwrap(), &x(2, 0).pow(2) + &x(2, 1).pow(2));
        assert_eq!(elementary_symmetric_sq(2, 2).unwrap(), &x(2, 0).pow(2) * &x(2, 1).pow(2));
        let e4 = elementary_symmetric_sq(3, 2).unwrap();
        assert_eq!(e4.len(), 3);
        assert_eq!(e4.coeff_of(&[2, 0, 2]), int(1));
        assert!(elementary_symmetric_sq(2, 3).is_err());
        assert_eq!(elementary_symmetric_sq(3, 0).unwrap(), QMultiPoly::one(3));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_poly(1).unwrap(), x(1, 0));
        let d2 = &(&x(2, 0).pow(3) * &x(2, 1)) - &(&x(2, 0) * &x(2, 1).pow(3));
        assert_eq!(delta_poly(2).unwrap(), d2);
        let d3 = delta_poly(3).unwrap();
        assert_eq!(d3.len(), 6);
        assert_eq!(d3.total_degree(), Some(9));
        assert!(d3.is_homogeneous());
        assert!(d3.terms().all(|(_, c)| c == &int(1) || c == &int(-1)));
    }

    #[test]
    fn delta_is_alternating() {
        for n in 1..=3 {
            let d = delta_poly(n).unwrap();
            for i in 0..n {
                let mut negate = vec![false; n];
                negate[i] = true;
                assert_eq!(d.flip_signs(&negate), -&d);
                for j in i + 1..n {
                    let mut perm: Vec<usize> = (0..n).collect();
                    perm.swap(i, j);
                    assert_eq!(d.permute_vars(&perm), -&d);
                }
            }
        }
    }

    #[test]
    fn expansion_examples() {
        let e = expand_in_invariant_basis(2, 1, 1).unwrap();
        assert_eq!(e.leading, int(2));
        assert!(e.lower_terms.is_empty());
        assert_eq!(expand_in_invariant_basis(2, 1, 0).unwrap().leading, int(1));
        // (2m)! (2^{2m} - 1) b_m = 24 · 15 / 90
        assert_eq!(expand_in_invariant_basis(3, 2, 0).unwrap().leading, int(4));
        assert_eq!(expand_in_invariant_basis(3, 2, 2).unwrap().leading, rat(28, 3));
        assert!(expand_in_invariant_basis(2, 3, 0).is_err());
        assert!(expand_in_invariant_basis(2, 0, 0).is_err());
    }

    #[test]
    fn expansion_reconstructs_tau() {
        for n in 1..=3usize {
            for m in 1..=n {
                for k in 0..=n {
                    let e = expand_in_invariant_basis(n, m, k).unwrap();
                    assert_eq!(
                        e.reconstruct().unwrap(),
                        tau_poly(n, k, 2 * m as u32).unwrap(),
                        "n={n} m={m} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn budget_guard() {
        let err = expand_in_invariant_basis_with_budget(3, 3, 3, TermBudget(5)).unwrap_err();
        assert!(matches!(err, Error::Budget { budget: 5, .. }));
    }

    #[test]
    fn permutations_are_distinct() {
        assert_eq!(distinct_permutations(&[1, 0, 1]).len(), 3);
        assert_eq!(distinct_permutations(&[0, 1, 2]).len(), 6);
        assert_eq!(distinct_permutations(&[]).len(), 1);
        assert_eq!(orbit_size(&[0, 2, 2]), int(3));
    }
}
