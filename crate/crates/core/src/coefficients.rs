//! The leading coefficients `c_{n,m}^{(k)}` by every available route.
//!
//! Each route is an independent computation of the same number:
//!
//! | route        | source                                                     |
//! |--------------|------------------------------------------------------------|
//! | `oracle`     | solve `τ_{2m}^{(k)}` in the `e`-basis symbolically          |
//! | `matrix`     | signed sum over even-column upper quadrilateral matrices    |
//! | `partition`  | the same sum collapsed onto ordered partitions of `m`       |
//! | `young`      | sum over Young diagrams, read off `G_{n,m}(t)`              |
//! | `generating` | the Bernoulli recursion for `G_m(t)`, read off `G_{n,m}`    |
//! | `recursion`  | induction in `k` seeded by the closed forms at the ends     |
//! | `extremal`   | closed forms at `k ∈ {0, 1, n-3, n-2, n-1, n}`              |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bernoulli::b;
use crate::combinatorics::{
    enum_matrices_even, enum_ordered_partitions, enum_young, factorial, factorial_q, OrderedPartition,
    YoungDiagram,
};
use crate::error::{Error, Result};
use crate::exact::scalar::{int, rat, sign_pow};
use crate::generating;
use crate::invariants::{expand_in_invariant_basis_with_budget, TermBudget};
use crate::{QPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Oracle,
    Matrix,
    Partition,
    Young,
    Generating,
    Recursion,
    Extremal,
}

impl Route {
    pub const ALL: [Route; 7] = [
        Route::Oracle,
        Route::Matrix,
        Route::Partition,
        Route::Young,
        Route::Generating,
        Route::Recursion,
        Route::Extremal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Oracle => "oracle",
            Route::Matrix => "matrix",
            Route::Partition => "partition",
            Route::Young => "young",
            Route::Generating => "generating",
            Route::Recursion => "recursion",
            Route::Extremal => "extremal",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown route '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRecord {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(with = "rational_string")]
    pub value: Rational,
    pub route: Route,
}

impl CoefficientRecord {
    fn new(n: usize, m: usize, k: usize, value: Rational, route: Route) -> Self {
        Self { n, m, k, value, route }
    }
}

/// Rationals travel as `"p/q"` strings.
pub(crate) mod rational_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exact::scalar::{format_rational, parse_rational};
    use crate::Rational;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).ok_or_else(|| serde::de::Error::custom(format!("invalid rational '{text}'")))
    }
}

pub fn check_domain(n: usize, m: usize, k: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::domain(format!("need 1 <= m <= n (n = {n}, m = {m})")));
    }
    if k > n {
        return Err(Error::domain(format!("need 0 <= k <= n (n = {n}, k = {k})")));
    }
    Ok(())
}

/// `u_{n,m}(ν) = m (-1)^{ℓ-1} (ℓ-1)! (n-ℓ)!` with `ℓ` the number of nonzero parts.
pub fn u_value(n: usize, m: usize, nu: &OrderedPartition) -> Result<Rational> {
    if m == 0 {
        return Err(Error::domain("u needs m >= 1"));
    }
    if nu.len() != n || nu.total() as usize != m {
        return Err(Error::domain(format!(
            "u_{{{n},{m}}} needs an ordered partition of {m} into {n} parts, got {:?}",
            nu.parts()
        )));
    }
    let ell = nu.ell();
    let v = BigInt::from(m as i64 * sign_pow(ell - 1)) * factorial(ell - 1) * factorial(n - ell);
    Ok(Rational::from_integer(v))
}

/// `(Σν + k)! / (∏_{j=1}^{k} (ν_1+…+ν_j + j) · ∏ ν_j!)`, with `n = ν.len()`.
pub fn v_value(n: usize, k: usize, nu: &[u32]) -> Result<Rational> {
    if nu.len() != n {
        return Err(Error::domain(format!("v needs {n} entries, got {}", nu.len())));
    }
    if k > n {
        return Err(Error::domain(format!("v needs k <= n (k = {k}, n = {n})")));
    }
    let total: usize = nu.iter().map(|&x| x as usize).sum();
    let mut denom = BigInt::one();
    let mut partial = 0usize;
    for (j, &x) in nu.iter().enumerate().take(k) {
        partial += x as usize;
        denom *= BigInt::from(partial + j + 1);
    }
    for &x in nu {
        denom *= factorial(x as usize);
    }
    Ok(Rational::new(factorial(total + k), denom))
}

/// `v̄_n^{(k)}(ν)`, the doubled-partition weight appearing in the partition route.
fn v_bar(k: usize, nu: &[u32]) -> Rational {
    let mut denom = BigInt::one();
    let mut partial = 0usize;
    for (j, &x) in nu.iter().enumerate().take(k) {
        partial += 2 * x as usize;
        denom *= BigInt::from(partial + j + 1);
    }
    for &x in nu {
        denom *= factorial(2 * x as usize);
    }
    Rational::new(BigInt::one(), denom)
}

/// `w_k(μ) = 1 / (∏ s_j! · ∏ ((2j+1)!)^{s_j})`, where `s_j` counts the parts
/// equal to `j` among the `k` entries of `μ` (zeros included).
pub fn w_value(k: usize, mu: &YoungDiagram) -> Result<Rational> {
    let mults = mu.multiplicities(k).ok_or_else(|| {
        Error::domain(format!("w_{k} needs at most {k} parts, got {:?}", mu.parts()))
    })?;
    let mut denom = BigInt::one();
    for (j, &s) in mults.iter().enumerate() {
        denom *= factorial(s) * factorial(2 * j + 1).pow(s as u32);
    }
    Ok(Rational::new(BigInt::one(), denom))
}

/// Route `matrix`: the signed sum over `M_{n,m}^{(k)}`.
pub fn c_matrix(n: usize, m: usize, k: usize) -> Result<CoefficientRecord> {
    check_domain(n, m, k)?;
    // (-1)^{ℓ-1} (ℓ-1)! (n-ℓ)! for ℓ = 1..=m
    let weights: Vec<BigInt> = (1..=m)
        .map(|ell| factorial(ell - 1) * factorial(n - ell) * sign_pow(ell - 1))
        .collect();
    let mut sum = BigInt::zero();
    for a in enum_matrices_even(n, k, 2 * m as u32)? {
        sum += &weights[a.ell() - 1] * a.factorial_ratio();
    }
    let value = Rational::new(sum * (m as i64 * sign_pow(m - 1)), factorial(n));
    Ok(CoefficientRecord::new(n, m, k, value, Route::Matrix))
}

/// Route `partition`: the matrix sum grouped by column sums `2ν`.
pub fn c_partition(n: usize, m: usize, k: usize) -> Result<CoefficientRecord> {
    check_domain(n, m, k)?;
    let mut sum = Rational::zero();
    for nu in enum_ordered_partitions(m as u32, n) {
        let ell = nu.ell();
        let weight = Rational::from_integer(factorial(ell - 1) * factorial(n - ell) * sign_pow(ell - 1));
        sum += weight * v_bar(k, nu.parts());
    }
    let prefactor = factorial_q(2 * m + k) * int(m as i64 * sign_pow(m - 1)) / factorial_q(n);
    Ok(CoefficientRecord::new(n, m, k, prefactor * sum, Route::Partition))
}

/// `G_{n,m}(t)` assembled from the Young-diagram sum, with the `(t+1)`
/// denominators of the `T_j` cleared against `(t+1)^n`.
pub fn g_young(n: usize, m: usize) -> Result<QPoly> {
    if m == 0 || m > n {
        return Err(Error::domain(format!("need 1 <= m <= n (n = {n}, m = {m})")));
    }
    let numerators: Vec<QPoly> = (0..=m)
        .map(|j| {
            let d = factorial_q(2 * j + 1);
            QPoly::linear(int(1) / d.clone(), int(2 * j as i64 + 1) / d)
        })
        .collect();
    let t_plus_1 = QPoly::linear(int(1), int(1));
    let mut total = QPoly::zero();
    for lambda in enum_young(m as u32, m) {
        let r = lambda.multiplicities(m).expect("at most m parts");
        let ell = lambda.length();
        let mut coeff = factorial_q(ell - 1) * int(sign_pow(ell - 1));
        let mut term = t_plus_1.pow(n - ell);
        for (j, &rj) in r.iter().enumerate().skip(1) {
            if rj > 0 {
                coeff /= factorial_q(rj);
                term = &term * &numerators[j].pow(rj);
            }
        }
        total = &total + &term.scale(&coeff);
    }
    Ok(total.scale(&int(m as i64 * sign_pow(m - 1))))
}

/// `c^{(k)} = [t^{n-k}] G_{n,m} · (n-k)! (2m+k)! / n!`.
pub fn c_from_generating(g: &QPoly, n: usize, m: usize, k: usize) -> Rational {
    g.coeff(n - k) * factorial_q(n - k) * factorial_q(2 * m + k) / factorial_q(n)
}

/// Route `young`.
pub fn c_young(n: usize, m: usize, k: usize) -> Result<CoefficientRecord> {
    check_domain(n, m, k)?;
    let g = g_young(n, m)?;
    Ok(CoefficientRecord::new(n, m, k, c_from_generating(&g, n, m, k), Route::Young))
}

/// Route `generating`.
pub fn c_generating(n: usize, m: usize, k: usize) -> Result<CoefficientRecord> {
    check_domain(n, m, k)?;
    let g = generating::g_nm(n, m)?;
    Ok(CoefficientRecord::new(n, m, k, c_from_generating(&g, n, m, k), Route::Generating))
}

/// Which closed form produced an extremal value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremalForm {
    /// `k = 0`: `(2m)! (2^{2m} - 1) b_m`.
    Bottom,
    /// `k = 1`: `(2m+1)! {(2^{2m}-1) b_m - (2m/n)(2^{2m+2}-1) b_{m+1}}`.
    SecondFromBottom,
    /// `k ∈ {n-1, n}`, and `k = n-2` when `m >= 2`: `(n+2m)!/n! · b_m`.
    Top,
    /// `k = n-3` (`n >= 3`, `m >= 2`).
    ThirdFromTop,
}

fn two_pow_minus_one(e: usize) -> Rational {
    Rational::from_integer((BigInt::one() << e) - 1)
}

/// Every closed form that applies at `(n, m, k)`, in a fixed order.
pub fn extremal_candidates(n: usize, m: usize, k: usize) -> Result<Vec<(ExtremalForm, Rational)>> {
    check_domain(n, m, k)?;
    let mut out = Vec::new();
    if k == 0 {
        out.push((ExtremalForm::Bottom, factorial_q(2 * m) * two_pow_minus_one(2 * m) * b(m)));
    }
    if k == 1 {
        let v = factorial_q(2 * m + 1)
            * (two_pow_minus_one(2 * m) * b(m)
                - rat(2 * m as i64, n as i64) * two_pow_minus_one(2 * m + 2) * b(m + 1));
        out.push((ExtremalForm::SecondFromBottom, v));
    }
    if k + 1 >= n || (m >= 2 && k + 2 == n) {
        out.push((ExtremalForm::Top, factorial_q(n + 2 * m) / factorial_q(n) * b(m)));
    }
    if n >= 3 && m >= 2 && k + 3 == n {
        let v = (factorial_q(n + 2 * m) * b(m) - int(4 * m as i64) * factorial_q(n + 2 * m - 3) * b(m - 1))
            / factorial_q(n);
        out.push((ExtremalForm::ThirdFromTop, v));
    }
    Ok(out)
}

/// Route `extremal`; `None` when no closed form covers `(n, m, k)`.
pub fn c_extremal(n: usize, m: usize, k: usize) -> Result<Option<CoefficientRecord>> {
    Ok(extremal_candidates(n, m, k)?
        .into_iter()
        .next()
        .map(|(_, v)| CoefficientRecord::new(n, m, k, v, Route::Extremal)))
}

/// `c_{n,1}^{(k)} = (k+1)(k+2)(1/2 - k/(3n))`: the Bernstein coefficients of
/// `F_{n,1}(t) = 1/2 - t/3`, which covers the `m = 1` interior that the
/// `k`-recursion cannot reach.
fn c_m1(n: usize, k: usize) -> Rational {
    int(((k + 1) * (k + 2)) as i64) * (rat(1, 2) - rat(k as i64, 3 * n as i64))
}

/// Coefficients filled by the induction in `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecursionTable {
    pub n_max: usize,
    pub m_max: usize,
    entries: BTreeMap<(usize, usize, usize), Rational>,
}

/// The bracket factor `(n-k)(n-k-1) m / (n (m-1))` of the `k`-recursion.
fn step_factor(n: usize, m: usize, k: usize) -> Rational {
    rat(((n - k) * (n - k - 1) * m) as i64, (n * (m - 1)) as i64)
}

impl RecursionTable {
    pub fn get(&self, n: usize, m: usize, k: usize) -> Option<&Rational> {
        self.entries.get(&(n, m, k))
    }

    fn at(&self, n: usize, m: usize, k: usize) -> &Rational {
        &self.entries[&(n, m, k)]
    }

    pub fn records(&self) -> impl Iterator<Item = CoefficientRecord> + '_ {
        self.entries
            .iter()
            .map(|(&(n, m, k), v)| CoefficientRecord::new(n, m, k, v.clone(), Route::Recursion))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The `(n, m, k)` cells with `1 <= k <= n-2` and `m >= 2` whose
    /// neighbours are all present.
    fn interior(&self) -> Vec<(usize, usize, usize)> {
        let mut cells = Vec::new();
        for n in 2..=self.n_max {
            for m in 2..=self.m_max.min(n) {
                for k in 1..n - 1 {
                    cells.push((n, m, k));
                }
            }
        }
        cells
    }

    /// Direction (b): recover `c^{(k-1)}` from `c^{(k)}` and the `(n-1, m-1)`
    /// column, and compare with the stored value.
    pub fn replay_lower(&self) -> Result<()> {
        for (n, m, k) in self.interior() {
            let bracket = int(2 * m as i64 + k as i64 - 1) * self.at(n - 1, m - 1, k)
                - int(k as i64 + 1) * self.at(n - 1, m - 1, k + 1);
            let lower = self.at(n, m, k) - step_factor(n, m, k) * bracket;
            if &lower != self.at(n, m, k - 1) {
                return Err(Error::invariant(format!(
                    "downward replay disagrees at (n, m, k) = ({n}, {m}, {})",
                    k - 1
                )));
            }
        }
        Ok(())
    }

    /// Direction (c): recover `c_{n-1,m-1}^{(k+1)}` from the other three.
    pub fn replay_diagonal(&self) -> Result<()> {
        for (n, m, k) in self.interior() {
            let diff = self.at(n, m, k) - self.at(n, m, k - 1);
            let upper = (int(2 * m as i64 + k as i64 - 1) * self.at(n - 1, m - 1, k)
                - diff / step_factor(n, m, k))
                / int(k as i64 + 1);
            if &upper != self.at(n - 1, m - 1, k + 1) {
                return Err(Error::invariant(format!(
                    "diagonal replay disagrees at (n, m, k) = ({}, {}, {})",
                    n - 1,
                    m - 1,
                    k + 1
                )));
            }
        }
        Ok(())
    }

    /// `c^{(n-2)} = c^{(n-1)} = c^{(n)}` for `m >= 2`, with the upward sweep
    /// supplying `c^{(n-2)}` independently of the closed form.
    pub fn check_top_plateau(&self) -> Result<()> {
        for (&(n, m, k), v) in &self.entries {
            if m >= 2 && n >= 2 && k == n - 2 && v != self.at(n, m, n) {
                return Err(Error::invariant(format!(
                    "c^(n-2) differs from c^(n) at (n, m) = ({n}, {m})"
                )));
            }
        }
        Ok(())
    }
}

/// Route `recursion`: fills `c_{n,m}^{(k)}` for `n <= n_max`, `m <= m_max`.
///
/// For `m >= 2` each row starts from the closed form at `k = 0`, sweeps
/// upward with the `k`-recursion through `k = n-2`, and takes `k = n-1, n`
/// from the closed form. The `m = 1` rows, where the recursion divides by
/// zero, come from the Bernstein coefficients of `F_{n,1}`. The filled table
/// is then replayed in the other two directions.
pub fn c_recursion_table(n_max: usize, m_max: usize) -> Result<RecursionTable> {
    if m_max == 0 || m_max > n_max {
        return Err(Error::domain(format!(
            "need 1 <= m_max <= n_max (n_max = {n_max}, m_max = {m_max})"
        )));
    }
    let mut entries = BTreeMap::new();
    let top = |n: usize, m: usize| factorial_q(n + 2 * m) / factorial_q(n) * b(m);
    for n in 1..=n_max {
        for m in 1..=m_max.min(n) {
            if m == 1 {
                for k in 0..=n {
                    entries.insert((n, 1, k), c_m1(n, k));
                }
                continue;
            }
            let mut prev = factorial_q(2 * m) * two_pow_minus_one(2 * m) * b(m);
            entries.insert((n, m, 0), prev.clone());
            for k in 1..n - 1 {
                let bracket = int(2 * m as i64 + k as i64 - 1) * &entries[&(n - 1, m - 1, k)]
                    - int(k as i64 + 1) * &entries[&(n - 1, m - 1, k + 1)];
                prev += step_factor(n, m, k) * bracket;
                entries.insert((n, m, k), prev.clone());
            }
            entries.insert((n, m, n - 1), top(n, m));
            entries.insert((n, m, n), top(n, m));
        }
    }
    let table = RecursionTable {
        n_max,
        m_max,
        entries,
    };
    table.replay_lower()?;
    table.replay_diagonal()?;
    table.check_top_plateau()?;
    Ok(table)
}

/// Route `oracle`, under the term budget from the environment.
pub fn c_oracle(n: usize, m: usize, k: usize) -> Result<CoefficientRecord> {
    c_oracle_with_budget(n, m, k, TermBudget::from_env())
}

pub fn c_oracle_with_budget(n: usize, m: usize, k: usize, budget: TermBudget) -> Result<CoefficientRecord> {
    check_domain(n, m, k)?;
    let e = expand_in_invariant_basis_with_budget(n, m, k, budget)?;
    Ok(CoefficientRecord::new(n, m, k, e.leading, Route::Oracle))
}

/// Dispatch by route. `extremal` outside its range is a domain error.
pub fn coefficient(route: Route, n: usize, m: usize, k: usize) -> Result<CoefficientRecord> {
    match route {
        Route::Oracle => c_oracle(n, m, k),
        Route::Matrix => c_matrix(n, m, k),
        Route::Partition => c_partition(n, m, k),
        Route::Young => c_young(n, m, k),
        Route::Generating => c_generating(n, m, k),
        Route::Recursion => {
            check_domain(n, m, k)?;
            let table = c_recursion_table(n, m)?;
            let value = table.at(n, m, k).clone();
            Ok(CoefficientRecord::new(n, m, k, value, Route::Recursion))
        }
        Route::Extremal => c_extremal(n, m, k)?.ok_or_else(|| {
            Error::domain(format!("no closed form covers (n, m, k) = ({n}, {m}, {k})"))
        }),
    }
}
