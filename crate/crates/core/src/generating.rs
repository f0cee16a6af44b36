//! Generating polynomials of the coefficients and the series identities
//! they satisfy.
//!
//! `G_{n,m}(t) = Σ_k n! c^{(k)} / ((n-k)! (2m+k)!) · t^{n-k}` factors as
//! `(t+1)^{n-m} G_m(t)`, and `G_m` obeys a recursion in the scaled Bernoulli
//! numbers `b_m`. Two reparametrisations are also provided:
//! `Ĝ_{n,m}(t) = t^n G_{n,m}(1/t)` and `F_{n,m}(t) = t^n G_{n,m}((1-t)/t)`,
//! the latter independent of `n`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bernoulli::{b, coth_series, tanh_series};
use crate::coefficients::{coefficient, Route};
use crate::combinatorics::{enum_young, factorial_q};
use crate::error::{Error, Result};
use crate::exact::scalar::{format_rational, int, rat, sign_pow};
use crate::exact::{series_log, Series};
use crate::{QPoly, QSeries, Rational, TSeries};

fn t_plus_1() -> QPoly {
    QPoly::linear(int(1), int(1))
}

fn one_minus_t() -> QPoly {
    QPoly::linear(int(1), int(-1))
}

/// `G_1, …, G_m` from the Bernoulli recursion.
pub fn g_sequence(m: usize) -> Result<Vec<QPoly>> {
    if m == 0 {
        return Err(Error::domain("G_m needs m >= 1"));
    }
    let tp1 = t_plus_1();
    let mut gs: Vec<QPoly> = vec![QPoly::linear(rat(1, 6), rat(1, 2))];
    for mm in 2..=m {
        let mut sum = QPoly::zero();
        for i in 1..mm {
            let term = &tp1.pow(mm - i - 1) * &gs[i - 1];
            sum = &sum + &term.scale(&b(mm - i));
        }
        let g = &tp1.pow(mm - 1).scale(&b(mm)) + &(&QPoly::t() * &sum).scale(&int(2));
        gs.push(g);
    }
    Ok(gs)
}

/// `G_m(t)`.
pub fn g_recursive(m: usize) -> Result<QPoly> {
    Ok(g_sequence(m)?.pop().expect("nonempty"))
}

fn check_nm(n: usize, m: usize) -> Result<()> {
    if m == 0 || n < m {
        return Err(Error::domain(format!(
            "generating polynomials need n >= m >= 1 (n = {n}, m = {m})"
        )));
    }
    Ok(())
}

/// `G_{n,m}(t) = (t+1)^{n-m} G_m(t)`.
pub fn g_nm(n: usize, m: usize) -> Result<QPoly> {
    check_nm(n, m)?;
    Ok(&t_plus_1().pow(n - m) * &g_recursive(m)?)
}

/// `Ĝ_{n,m}(t) = t^n G_{n,m}(1/t)`.
pub fn ghat_nm(n: usize, m: usize) -> Result<QPoly> {
    Ok(g_nm(n, m)?.reversed(n))
}

/// `G_{n,m}` assembled from coefficients supplied by `provider(k)`, `k = 0..=n`.
pub fn g_from_coefficients(
    n: usize,
    m: usize,
    mut provider: impl FnMut(usize) -> Result<Rational>,
) -> Result<QPoly> {
    check_nm(n, m)?;
    let mut coeffs = vec![Rational::zero(); n + 1];
    for k in 0..=n {
        let c = provider(k)?;
        coeffs[n - k] = factorial_q(n) * c / (factorial_q(n - k) * factorial_q(2 * m + k));
    }
    Ok(QPoly::new(coeffs))
}

/// [`g_from_coefficients`] fed by one coefficient route.
pub fn g_from_route(n: usize, m: usize, route: Route) -> Result<QPoly> {
    g_from_coefficients(n, m, |k| coefficient(route, n, m, k).map(|r| r.value))
}

/// `t^n g((1-t)/t)` for a polynomial `g` of degree at most `n`.
pub fn bernstein_transform(g: &QPoly, n: usize) -> QPoly {
    let mut out = QPoly::zero();
    for (j, gj) in g.coeffs().iter().enumerate() {
        if gj.is_zero() {
            continue;
        }
        let term = &one_minus_t().pow(j) * &QPoly::monomial(gj.clone(), n - j);
        out = &out + &term;
    }
    out
}

/// `F_{n,m}(t) = t^n G_{n,m}((1-t)/t)`.
pub fn f_nm(n: usize, m: usize) -> Result<QPoly> {
    Ok(bernstein_transform(&g_nm(n, m)?, n))
}

/// `F_m` from `F_{m-1}` by matching coefficients in
/// `2F_m + (t/m) F_m' + ((1-t)²/(m-1)) F_{m-1}' = 0`.
///
/// The value `F_m(0) = (2^{2m}-1) b_m` is not used as input; it is checked
/// afterwards and a mismatch is reported as an invariant violation.
pub fn f_via_ode(m: usize, prev: &QPoly) -> Result<QPoly> {
    if m < 2 {
        return Err(Error::domain("the F recursion starts at m = 2"));
    }
    let f = |j: usize| prev.coeff(j);
    let mut a = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let jj = j as i64;
        let mut bracket = int(jj + 1) * f(j + 1) - int(2 * jj) * f(j);
        if j >= 1 {
            bracket += int(jj - 1) * f(j - 1);
        }
        // (2 + j/m) a_j = -bracket / (m-1)
        let lhs = rat(2 * m as i64 + jj, m as i64);
        a.push(-bracket / (int(m as i64 - 1) * lhs));
    }
    let out = QPoly::new(a);
    let expected = Rational::from_integer((BigInt::one() << (2 * m)) - 1) * b(m);
    if out.coeff(0) != expected {
        return Err(Error::invariant(format!(
            "F_{m}(0) = {} but the closed form gives {}",
            format_rational(&out.coeff(0)),
            format_rational(&expected)
        )));
    }
    Ok(out)
}

/// `G_m`, `Ĝ_m` and `F_m` for one `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingFamily {
    pub m: usize,
    pub g: QPoly,
    pub ghat: QPoly,
    pub f: QPoly,
}

impl GeneratingFamily {
    pub fn new(m: usize) -> Result<Self> {
        let g = g_recursive(m)?;
        Ok(Self {
            m,
            ghat: g.reversed(m),
            f: bernstein_transform(&g, m),
            g,
        })
    }
}

/// `β_m = m Σ_{λ ⊢ m} (-1)^{ℓ-1} (ℓ-1)!/(r_1!⋯r_m!) α_1^{r_1}⋯α_m^{r_m}`,
/// the `z^{2m}` coefficient of `log(1 + Σ α_j z^{2j})` times `m`.
/// `alphas[j-1]` holds `α_j`.
pub fn beta_young(m: usize, alphas: &[Rational]) -> Result<Rational> {
    if m == 0 || alphas.len() < m {
        return Err(Error::domain(format!("β_{m} needs α_1..α_{m}")));
    }
    let mut sum = Rational::zero();
    for lambda in enum_young(m as u32, m) {
        let r = lambda.multiplicities(m).expect("at most m parts");
        let ell = lambda.length();
        let mut term = factorial_q(ell - 1) * int(sign_pow(ell - 1));
        for (j, &rj) in r.iter().enumerate().skip(1) {
            if rj > 0 {
                term = term * num_traits::pow(alphas[j - 1].clone(), rj) / factorial_q(rj);
            }
        }
        sum += term;
    }
    Ok(sum * int(m as i64))
}

/// Outcome of one identity in [`identity_suite`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    /// Power of `z` where the two sides first differ.
    pub first_mismatch: Option<usize>,
}

impl IdentityCheck {
    fn compare<R: crate::Ring>(name: &str, lhs: &Series<R>, rhs: &Series<R>) -> Self {
        let first_mismatch = lhs.first_difference(rhs);
        Self {
            name: name.to_string(),
            passed: first_mismatch.is_none(),
            first_mismatch,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub order: usize,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn constant_series(s: &QSeries) -> TSeries {
    s.map(|c| QPoly::constant(c.clone()))
}

/// `(1-t) cosh z + t sinh z / z` over `Q[t]`.
fn cosh_sinh_blend(order: usize) -> TSeries {
    Series::from_fn(order, |j| {
        if j % 2 == 1 {
            QPoly::zero()
        } else {
            &one_minus_t().scale(&factorial_q(j).recip()) + &QPoly::t().scale(&factorial_q(j + 1).recip())
        }
    })
}

/// Generating-series identity (i), denominators `(t+1)` cleared.
pub fn check_generating_series(order: usize, gs: &[QPoly]) -> IdentityCheck {
    let big_m = order / 2;
    let tp1 = t_plus_1();
    let zcoth = constant_series(&coth_series(order));
    let lhs_sum = Series::from_fn(order, |j| {
        if j == 0 || j % 2 == 1 {
            return QPoly::zero();
        }
        let m = j / 2;
        (&gs[m - 1] * &tp1.pow(big_m - m)).scale(&int(sign_pow(m - 1)))
    });
    let factor = (&zcoth.mul_scalar(&QPoly::t()) + &Series::one(order)).scale(&int(2));
    let lhs = &lhs_sum * &factor;
    let bracket = &(&zcoth + &Series::monomial(order, QPoly::t(), 2)) - &Series::one(order);
    let rhs = bracket.mul_scalar(&tp1.pow(big_m));
    IdentityCheck::compare("generating-series", &lhs, &rhs)
}

/// The log series `Φ` and its expected coefficients `(-1)^{m-1} F_m / m`.
fn log_sides(order: usize, fs: &[QPoly]) -> Result<(TSeries, TSeries)> {
    let phi = series_log(&cosh_sinh_blend(order), order)?;
    let expected = Series::from_fn(order, |j| {
        if j == 0 || j % 2 == 1 {
            QPoly::zero()
        } else {
            let m = j / 2;
            fs[m - 1].scale(&rat(sign_pow(m - 1), m as i64))
        }
    });
    Ok((phi, expected))
}

/// Identity (ii): the logarithm expansion in `F_m`.
pub fn check_log_expansion(order: usize, fs: &[QPoly]) -> Result<IdentityCheck> {
    let (phi, expected) = log_sides(order, fs)?;
    Ok(IdentityCheck::compare("log-expansion", &phi, &expected))
}

/// Identity (iii): `zΦ_z + (t - (1-t)²z²)Φ_t - (1-t)z² = 0`.
pub fn check_pde(order: usize) -> Result<IdentityCheck> {
    let phi = series_log(&cosh_sinh_blend(order), order)?;
    let phi_t = phi.map(|p| p.derivative());
    let omt = one_minus_t();
    let residual = &(&(&phi.euler() + &phi_t.mul_scalar(&QPoly::t()))
        - &phi_t.shift_up(2).mul_scalar(&omt.pow(2)))
        - &Series::monomial(order, omt, 2);
    Ok(IdentityCheck::compare("pde", &residual, &Series::zero(order)))
}

/// Identity (iv): `Σ (-1)^{m-1} Ĝ_m(0) z^{2m} = (z/2) tanh z`.
pub fn check_ghat_tanh(order: usize, gs: &[QPoly]) -> IdentityCheck {
    let lhs = Series::from_fn(order, |j| {
        if j == 0 || j % 2 == 1 {
            Rational::zero()
        } else {
            let m = j / 2;
            gs[m - 1].reversed(m).coeff(0) * int(sign_pow(m - 1))
        }
    });
    let rhs = tanh_series(order).shift_up(1).scale(&rat(1, 2));
    IdentityCheck::compare("ghat-tanh", &lhs, &rhs)
}

/// `T_j(t) = ((2j+1)t + 1) / ((2j+1)! (t+1))` at a rational point.
pub fn t_value(j: usize, t: &Rational) -> Rational {
    (int(2 * j as i64 + 1) * t + int(1)) / (factorial_q(2 * j + 1) * (t + int(1)))
}

/// At each rational sample point `t`, the Young-diagram sum `β_m` with
/// `α_j = T_j(t)` matches both the logarithm of `1 + Σ T_j z^{2j}` and
/// `(-1)^{m-1} G_m(t) / (t+1)^m`.
pub fn check_young_log(order: usize, gs: &[QPoly]) -> Result<IdentityCheck> {
    let big_m = order / 2;
    let samples = [int(0), rat(1, 3), int(2), rat(-1, 2), int(7)];
    for t in &samples {
        let alphas: Vec<Rational> = (1..=big_m).map(|j| t_value(j, t)).collect();
        let base = Series::from_fn(order, |j| {
            if j == 0 {
                int(1)
            } else if j % 2 == 1 {
                Rational::zero()
            } else {
                alphas[j / 2 - 1].clone()
            }
        });
        let log = series_log(&base, order)?;
        let by_young = Series::from_fn(order, |j| {
            if j == 0 || j % 2 == 1 {
                Rational::zero()
            } else {
                let m = j / 2;
                beta_young(m, &alphas).expect("m <= len") / int(m as i64)
            }
        });
        let by_g = Series::from_fn(order, |j| {
            if j == 0 || j % 2 == 1 {
                Rational::zero()
            } else {
                let m = j / 2;
                gs[m - 1].eval(t) * int(sign_pow(m - 1))
                    / (num_traits::pow(t + int(1), m) * int(m as i64))
            }
        });
        for (lhs, rhs) in [(&log, &by_young), (&log, &by_g)] {
            let check = IdentityCheck::compare("young-log", lhs, rhs);
            if !check.passed {
                return Ok(check);
            }
        }
    }
    Ok(IdentityCheck {
        name: "young-log".into(),
        passed: true,
        first_mismatch: None,
    })
}

/// Verifies the series identities tying `G_m`, `Ĝ_m` and `F_m` together,
/// modulo `z^{order+1}`. `order` must be even and at least 4.
pub fn identity_suite(order: usize) -> Result<IdentityReport> {
    if order < 4 || order % 2 == 1 {
        return Err(Error::domain(format!("identity order must be even and >= 4, got {order}")));
    }
    let gs = g_sequence(order / 2)?;
    let fs: Vec<QPoly> = gs.iter().enumerate().map(|(i, g)| bernstein_transform(g, i + 1)).collect();
    let checks = vec![
        check_generating_series(order, &gs),
        check_log_expansion(order, &fs)?,
        check_pde(order)?,
        check_ghat_tanh(order, &gs),
        check_young_log(order, &gs)?,
    ];
    Ok(IdentityReport { order, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::g_young;
    use crate::exact::series_div;

    fn poly(cs: &[(i64, i64)]) -> QPoly {
        QPoly::new(cs.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_recursive(1).unwrap(), poly(&[(1, 6), (1, 2)]));
        assert_eq!(g_recursive(2).unwrap(), poly(&[(1, 90), (1, 15), (1, 6)]));
        assert_eq!(g_recursive(2).unwrap(), g_young(2, 2).unwrap());
        let g3 = g_recursive(3).unwrap();
        assert_eq!(g3.degree(), Some(3));
        assert_eq!(g3.coeff(0), rat(1, 945));
        assert!(g_recursive(0).is_err());
    }

    #[test]
    fn g_nm_examples() {
        assert_eq!(g_nm(1, 1).unwrap(), poly(&[(1, 6), (1, 2)]));
        assert_eq!(g_nm(2, 1).unwrap(), poly(&[(1, 6), (2, 3), (1, 2)]));
        assert_eq!(g_nm(3, 1).unwrap(), poly(&[(1, 6), (5, 6), (7, 6), (1, 2)]));
        assert!(g_nm(1, 2).is_err());
    }

    #[test]
    fn g_from_routes() {
        assert_eq!(g_from_route(1, 1, Route::Oracle).unwrap(), g_nm(1, 1).unwrap());
        assert_eq!(g_from_route(2, 1, Route::Matrix).unwrap(), g_nm(2, 1).unwrap());
        assert_eq!(
            g_from_route(3, 2, Route::Partition).unwrap(),
            poly(&[(1, 90), (7, 90), (7, 30), (1, 6)])
        );
        let failing = g_from_coefficients(2, 1, |k| {
            if k == 1 {
                Err(Error::domain("boom"))
            } else {
                Ok(int(1))
            }
        });
        assert!(failing.is_err());
    }

    #[test]
    fn young_route_matches_recursion() {
        for m in 1..=7 {
            for n in m..=m + 2 {
                assert_eq!(g_young(n, m).unwrap(), g_nm(n, m).unwrap(), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn positivity() {
        for (i, g) in g_sequence(12).unwrap().iter().enumerate() {
            assert_eq!(g.degree(), Some(i + 1));
            assert!(g.coeffs().iter().all(|c| c > &Rational::zero()), "G_{}", i + 1);
        }
    }

    #[test]
    fn independence_of_n() {
        let tp1 = t_plus_1();
        for m in 1..=5 {
            let base = g_nm(m, m).unwrap();
            for n in m..=m + 3 {
                assert_eq!(&g_nm(n, m).unwrap() * &tp1.pow(m), &base * &tp1.pow(n));
            }
        }
    }

    #[test]
    fn endpoints() {
        for m in 1..=5 {
            for n in m..=m + 2 {
                let g = g_nm(n, m).unwrap();
                let c_top = factorial_q(n + 2 * m) / factorial_q(n) * b(m);
                assert_eq!(g.coeff(0), factorial_q(n) * c_top / factorial_q(n + 2 * m));
                let c_bottom = factorial_q(2 * m) * Rational::from_integer((BigInt::one() << (2 * m)) - 1) * b(m);
                assert_eq!(g.leading().unwrap(), &(c_bottom.clone() / factorial_q(2 * m)));
                assert_eq!(ghat_nm(n, m).unwrap().coeff(0), c_bottom / factorial_q(2 * m));
            }
        }
    }

    #[test]
    fn f_examples() {
        for n in 1..=5 {
            assert_eq!(f_nm(n, 1).unwrap(), poly(&[(1, 2), (-1, 3)]));
        }
        let f2 = poly(&[(1, 6), (-4, 15), (1, 9)]);
        assert_eq!(f_nm(2, 2).unwrap(), f2);
        assert_eq!(f_nm(4, 2).unwrap(), f2);
        for m in 1..=6 {
            let fm = f_nm(m, m).unwrap();
            assert_eq!(f_nm(m + 2, m).unwrap(), fm);
            assert_eq!(fm.coeff(0), Rational::from_integer((BigInt::one() << (2 * m)) - 1) * b(m));
        }
    }

    #[test]
    fn f_from_ode() {
        let f1 = poly(&[(1, 2), (-1, 3)]);
        assert_eq!(f_via_ode(2, &f1).unwrap(), poly(&[(1, 6), (-4, 15), (1, 9)]));
        let mut prev = f1;
        for m in 2..=8 {
            let next = f_via_ode(m, &prev).unwrap();
            assert_eq!(next.degree(), Some(m));
            assert_eq!(next, f_nm(m, m).unwrap(), "m={m}");
            // the equation holds identically, not just coefficientwise up to m
            let lhs = &(&next.scale(&int(2)) + &(&QPoly::t() * &next.derivative()).scale(&rat(1, m as i64)))
                + &(&one_minus_t().pow(2) * &prev.derivative()).scale(&rat(1, m as i64 - 1));
            assert_eq!(lhs, QPoly::zero());
            prev = next;
        }
        assert!(f_via_ode(1, &QPoly::one()).is_err());
        // a wrong predecessor breaks the F(0) check
        assert!(matches!(f_via_ode(2, &poly(&[(1, 2)])), Err(Error::Invariant(_))));
    }

    #[test]
    fn family_is_consistent() {
        for m in 1..=6 {
            let fam = GeneratingFamily::new(m).unwrap();
            let closed = Rational::from_integer((BigInt::one() << (2 * m)) - 1) * b(m);
            assert_eq!(fam.g.coeff(0), b(m));
            assert_eq!(fam.ghat.coeff(0), closed);
            assert_eq!(fam.f.coeff(0), closed);
            assert_eq!(fam.f, f_nm(m, m).unwrap());
        }
    }

    #[test]
    fn identity_suite_passes() {
        for order in [4, 8, 16] {
            let report = identity_suite(order).unwrap();
            assert_eq!(report.checks.len(), 5);
            assert!(report.all_passed(), "{report:?}");
        }
        assert!(identity_suite(2).is_err());
        assert!(identity_suite(7).is_err());
    }

    #[test]
    fn identity_low_coefficients() {
        let gs = g_sequence(4).unwrap();
        let lhs = Series::from_fn(8, |j| {
            if j == 2 {
                gs[0].reversed(1).coeff(0)
            } else {
                Rational::zero()
            }
        });
        assert_eq!(lhs.coeff(2), &rat(1, 2));
        let fs: Vec<QPoly> = gs.iter().enumerate().map(|(i, g)| bernstein_transform(g, i + 1)).collect();
        let (phi, _) = log_sides(8, &fs).unwrap();
        assert_eq!(phi.coeff(2), &poly(&[(1, 2), (-1, 3)]));
    }

    #[test]
    fn broken_input_is_reported() {
        let mut gs = g_sequence(4).unwrap();
        gs[2] = &gs[2] + &QPoly::monomial(int(1), 3);
        let check = check_generating_series(8, &gs);
        assert!(!check.passed);
        assert_eq!(check.first_mismatch, Some(6));
        let check = check_ghat_tanh(8, &gs);
        assert_eq!(check.first_mismatch, Some(6));
    }

    #[test]
    fn t_series_quotient_at_rational_points() {
        // (t cosh z + sinh z / z) / (t + 1) at a fixed t; the z² coefficient is T_1(t)
        for t in [int(0), rat(1, 3), int(5), rat(-2, 7)] {
            let num = Series::from_fn(6, |j| {
                if j % 2 == 1 {
                    Rational::zero()
                } else {
                    &t / factorial_q(j) + factorial_q(j + 1).recip()
                }
            });
            let den = Series::monomial(6, &t + int(1), 0);
            let q = series_div(&num, &den, 6).unwrap();
            assert_eq!(q.coeff(0), &int(1));
            assert_eq!(q.coeff(2), &((int(3) * &t + int(1)) / (int(6) * (&t + int(1)))));
            assert_eq!(q.coeff(4), &t_value(2, &t));
        }
    }

    #[test]
    fn polynomial_denominator_is_not_a_unit() {
        let num = cosh_sinh_blend(4);
        let den = Series::monomial(4, t_plus_1(), 0);
        assert!(series_div(&num, &den, 4).is_err());
    }
}
