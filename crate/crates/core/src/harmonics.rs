//! Exact mean-value checks on the skeletons of the cube `[-1,1]^n`.
//!
//! A polynomial `f` has the mean value property for the `k`-skeleton when
//! the average of `f(x + r y)` over `y` in the skeleton equals `f(x)` for all
//! `x` and `r`. With `r` kept as a formal variable this is a polynomial
//! identity in `(x, r)`, which [`mvp_check`] decides exactly.
//!
//! The derivatives of the alternating polynomial `Δ` span a space of
//! dimension `2^n n!`, every element of which passes the check for every `k`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use crate::combinatorics::{binomial, enum_ordered_partitions};
use crate::error::{Error, Result};
use crate::exact::scalar::{int, rat};
use crate::exact::{EchelonBasis, Monomial};
use crate::invariants::{delta_poly, tau_poly};
use crate::{QMultiPoly, Rational};

/// Largest `n` the module-dimension and basis suites accept by default.
pub const DEFAULT_MAX_N: usize = 3;

/// One `k`-dimensional face: the coordinates in `free` range over
/// `[-1, 1]`, every other coordinate is pinned to `±1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubeFace {
    pub n: usize,
    pub free: Vec<usize>,
    /// `(index, sign)` for each pinned coordinate, sign in `{-1, 1}`.
    pub fixed: Vec<(usize, i8)>,
}

impl CubeFace {
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// `∫_face y^b dy` (with the `k`-dimensional Lebesgue measure).
    pub fn integrate_monomial(&self, b: &[u32]) -> Rational {
        let mut acc = int(1);
        for &i in &self.free {
            if b[i] % 2 == 1 {
                return Rational::zero();
            }
            acc *= rat(2, b[i] as i64 + 1);
        }
        for &(i, s) in &self.fixed {
            if s < 0 && b[i] % 2 == 1 {
                acc = -acc;
            }
        }
        acc
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All `C(n,k) 2^{n-k}` faces of dimension `k`.
pub fn enum_faces(n: usize, k: usize) -> Result<impl Iterator<Item = CubeFace>> {
    if k > n {
        return Err(Error::domain(format!("face dimension k = {k} exceeds n = {n}")));
    }
    Ok(combinations(n, k).into_iter().flat_map(move |free| {
        let pinned: Vec<usize> = (0..n).filter(|i| !free.contains(i)).collect();
        (0..1u32 << pinned.len()).map(move |mask| CubeFace {
            n,
            free: free.clone(),
            fixed: pinned
                .iter()
                .enumerate()
                .map(|(j, &i)| (i, if mask >> j & 1 == 1 { -1 } else { 1 }))
                .collect(),
        })
    }))
}

/// Averages `y^b` over the `k`-skeleton, one face at a time, caching by `b`.
struct SkeletonMoments {
    faces: Vec<CubeFace>,
    total_measure: Rational,
    cache: HashMap<Vec<u32>, Rational>,
}

impl SkeletonMoments {
    fn new(n: usize, k: usize) -> Result<Self> {
        let faces: Vec<CubeFace> = enum_faces(n, k)?.collect();
        let total_measure = Rational::from_integer(binomial(n, k) << n);
        Ok(Self {
            faces,
            total_measure,
            cache: HashMap::new(),
        })
    }

    fn mean(&mut self, b: &[u32]) -> Rational {
        if let Some(v) = self.cache.get(b) {
            return v.clone();
        }
        let sum: Rational = self.faces.iter().map(|f| f.integrate_monomial(b)).sum();
        let v = sum / &self.total_measure;
        self.cache.insert(b.to_vec(), v.clone());
        v
    }
}

/// Every `b` with `0 <= b_i <= a_i`.
fn sub_exponents(a: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(a.len())];
    for &ai in a {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=ai).map(move |bi| {
                    let mut p = prefix.clone();
                    p.push(bi);
                    p
                })
            })
            .collect();
    }
    out
}

/// The skeleton average of `f(x + r y)` as a polynomial in `(x_1, …, x_n, r)`;
/// `r` is the last variable.
pub fn skeleton_average(f: &QMultiPoly, n: usize, k: usize) -> Result<QMultiPoly> {
    if f.nvars() != n {
        return Err(Error::domain(format!(
            "polynomial has {} variables, expected {n}",
            f.nvars()
        )));
    }
    let mut moments = SkeletonMoments::new(n, k)?;
    let mut out = QMultiPoly::zero(n + 1);
    for (mono, c) in f.terms() {
        let a = mono.exps();
        // ∏ (x_i + r y_i)^{a_i} = Σ_b ∏ C(a_i, b_i) x_i^{a_i - b_i} r^{b_i} y_i^{b_i}
        for b in sub_exponents(a) {
            let mean = moments.mean(&b);
            if mean.is_zero() {
                continue;
            }
            let mut weight = c * mean;
            let mut exps = Vec::with_capacity(n + 1);
            for (&ai, &bi) in a.iter().zip(&b) {
                weight *= Rational::from_integer(binomial(ai as usize, bi as usize));
                exps.push(ai - bi);
            }
            exps.push(b.iter().sum());
            out.add_term(Monomial::new(exps), weight);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MvpReport {
    pub f: QMultiPoly,
    pub n: usize,
    pub k: usize,
    /// Skeleton average minus `f`, in `(x, r)`.
    pub residual: QMultiPoly,
    pub holds: bool,
}

/// Decides the mean value property of `f` for the `k`-skeleton.
pub fn mvp_check(f: &QMultiPoly, n: usize, k: usize) -> Result<MvpReport> {
    let avg = skeleton_average(f, n, k)?;
    let slots: Vec<usize> = (0..n).collect();
    let residual = &avg - &f.embed(n + 1, &slots);
    Ok(MvpReport {
        f: f.clone(),
        n,
        k,
        holds: residual.is_zero(),
        residual,
    })
}

/// The span of all partial derivatives of `Δ`, as an independent set per degree.
#[derive(Clone, Debug)]
pub struct DerivativeModule {
    pub n: usize,
    /// Independent elements keyed by degree.
    pub by_degree: BTreeMap<u32, Vec<QMultiPoly>>,
}

impl DerivativeModule {
    pub fn dimension(&self) -> usize {
        self.by_degree.values().map(Vec::len).sum()
    }

    pub fn basis(&self) -> impl Iterator<Item = &QMultiPoly> {
        self.by_degree.values().rev().flatten()
    }

    /// Whether every `∂_i b` lies in the span of the next degree down.
    pub fn is_closed_under_derivatives(&self) -> bool {
        for (&d, elems) in &self.by_degree {
            if d == 0 {
                continue;
            }
            let (mons, lower) = match self.by_degree.get(&(d - 1)) {
                Some(lower) => (monomials_of_degree(self.n, d - 1), lower),
                None => return false,
            };
            let mut basis = EchelonBasis::new(mons.len());
            for p in lower {
                basis.insert(coordinates(p, &mons));
            }
            for p in elems {
                for i in 0..self.n {
                    if !basis.contains(coordinates(&p.partial(i), &mons)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn monomials_of_degree(n: usize, d: u32) -> HashMap<Vec<u32>, usize> {
    enum_ordered_partitions(d, n)
        .enumerate()
        .map(|(i, p)| (p.parts().to_vec(), i))
        .collect()
}

fn coordinates(p: &QMultiPoly, index: &HashMap<Vec<u32>, usize>) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); index.len()];
    for (m, c) in p.terms() {
        v[index[m.exps()]] = c.clone();
    }
    v
}

fn check_size(n: usize, max_n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("dimension n must be at least 1"));
    }
    if n > max_n {
        return Err(Error::domain(format!(
            "n = {n} exceeds the harmonic-suite bound {max_n}; raise the bound explicitly to proceed"
        )));
    }
    Ok(())
}

/// Builds the derivative module of `Δ` degree by degree, from the top down.
pub fn derivative_module(n: usize, max_n: usize) -> Result<DerivativeModule> {
    check_size(n, max_n)?;
    let delta = delta_poly(n)?;
    let top = delta.total_degree().expect("Δ is nonzero");
    let mut by_degree = BTreeMap::new();
    by_degree.insert(top, vec![delta]);
    for d in (0..top).rev() {
        let mons = monomials_of_degree(n, d);
        let mut basis = EchelonBasis::new(mons.len());
        let mut kept = Vec::new();
        for p in &by_degree[&(d + 1)] {
            for i in 0..n {
                let q = p.partial(i);
                if basis.insert(coordinates(&q, &mons)) {
                    kept.push(q);
                }
            }
        }
        by_degree.insert(d, kept);
    }
    Ok(DerivativeModule { n, by_degree })
}

/// `dim span{∂^α Δ}`; `n` is limited to [`DEFAULT_MAX_N`].
pub fn derivative_module_dimension(n: usize) -> Result<usize> {
    Ok(derivative_module(n, DEFAULT_MAX_N)?.dimension())
}

/// Whether `τ_{2m}^{(k)}(∂)` annihilates `Δ`.
pub fn annihilation_check(n: usize, m: usize, k: usize) -> Result<bool> {
    crate::coefficients::check_domain(n, m, k)?;
    let tau = tau_poly(n, k, 2 * m as u32)?;
    Ok(tau.apply_as_operator(&delta_poly(n)?).is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisMvpReport {
    pub n: usize,
    pub dimension: usize,
    pub expected_dimension: usize,
    /// `(basis index, k)` pairs where the mean value property failed.
    pub failures: Vec<(usize, usize)>,
    pub closed: bool,
}

impl BasisMvpReport {
    pub fn passed(&self) -> bool {
        self.dimension == self.expected_dimension && self.failures.is_empty() && self.closed
    }
}

/// Checks the mean value property for every basis element of the
/// derivative module and every skeleton dimension.
pub fn harmonic_basis_mvp_suite(n: usize, max_n: usize) -> Result<BasisMvpReport> {
    let module = derivative_module(n, max_n)?;
    let mut failures = Vec::new();
    for (i, p) in module.basis().enumerate() {
        for k in 0..=n {
            if !mvp_check(p, n, k)?.holds {
                failures.push((i, k));
            }
        }
    }
    let expected: usize = (1..=n).product::<usize>() << n;
    Ok(BasisMvpReport {
        n,
        dimension: module.dimension(),
        expected_dimension: expected,
        failures,
        closed: module.is_closed_under_derivatives(),
    })
}
