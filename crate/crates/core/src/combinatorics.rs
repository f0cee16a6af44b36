//! Index sets of the coefficient sums: ordered partitions, Young diagrams
//! and upper quadrilateral matrices.
//!
//! All enumerators are lazy iterators with a fixed, deterministic order.

use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::Rational;

/// `n!`, memoized.
pub fn factorial(n: usize) -> BigInt {
    static TABLE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(vec![BigInt::one()]));
    let mut t = table.lock().expect("factorial table poisoned");
    while t.len() <= n {
        let k = t.len();
        let next = &t[k - 1] * BigInt::from(k);
        t.push(next);
    }
    t[n].clone()
}

pub fn factorial_q(n: usize) -> Rational {
    Rational::from_integer(factorial(n))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// A length-`j` sequence of nonnegative integers with a fixed total.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPartition {
    parts: Vec<u32>,
}

impl OrderedPartition {
    pub fn new(parts: Vec<u32>) -> Self {
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of positive entries.
    pub fn ell(&self) -> usize {
        self.parts.iter().filter(|&&p| p > 0).count()
    }

    pub fn doubled(&self) -> Self {
        Self::new(self.parts.iter().map(|p| 2 * p).collect())
    }

    /// The underlying unordered partition.
    pub fn shape(&self) -> YoungDiagram {
        YoungDiagram::from_unsorted(self.parts.clone())
    }
}

/// Advances to the next composition of the same total and length in
/// lexicographically descending order; false once exhausted.
fn next_composition(parts: &mut [u32]) -> bool {
    let len = parts.len();
    if len < 2 {
        return false;
    }
    let Some(i) = (0..len - 1).rev().find(|&i| parts[i] > 0) else {
        return false;
    };
    let tail: u32 = parts[i + 1..].iter().sum();
    parts[i] -= 1;
    parts[i + 1] = tail + 1;
    for p in parts[i + 2..].iter_mut() {
        *p = 0;
    }
    true
}

fn first_composition(total: u32, len: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    if let Some(first) = v.first_mut() {
        *first = total;
    }
    v
}

/// Iterator over [`OrderedPartition`]s; see [`enum_ordered_partitions`].
#[derive(Clone, Debug)]
pub struct OrderedPartitions {
    current: Option<Vec<u32>>,
}

impl Iterator for OrderedPartitions {
    type Item = OrderedPartition;

    fn next(&mut self) -> Option<OrderedPartition> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        self.current = next_composition(&mut next).then_some(next);
        Some(OrderedPartition::new(out))
    }
}

/// Every `(m_1, ..., m_parts)` of nonnegative integers summing to `total`,
/// lexicographically descending.
pub fn enum_ordered_partitions(total: u32, parts: usize) -> OrderedPartitions {
    let current = if parts == 0 {
        (total == 0).then(Vec::new)
    } else {
        Some(first_composition(total, parts))
    };
    OrderedPartitions { current }
}

/// An unordered partition, stored as its weakly decreasing positive parts.
///
/// Zero parts are not stored: `(2,1,0)` and `(2,1)` are the same diagram.
/// Part counts enter only through [`YoungDiagram::multiplicities`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungDiagram {
    parts: Vec<u32>,
}

impl YoungDiagram {
    /// Parts must be weakly decreasing; trailing zeros are dropped.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain("Young diagram parts must be weakly decreasing"));
        }
        Ok(Self::from_unsorted(parts))
    }

    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Self { parts }
    }

    /// Diagram with `mults[i]` parts equal to `i` (the entry for `i = 0` is ignored).
    pub fn from_multiplicities(mults: &[usize]) -> Self {
        let mut parts = Vec::new();
        for (i, &r) in mults.iter().enumerate().skip(1).rev() {
            parts.extend(std::iter::repeat_n(i as u32, r));
        }
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `|λ|`.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `ℓ(λ)`, the number of positive parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// `(r_0, r_1, ..., r_max)` where part `i` occurs `r_i` times among
    /// `part_count` parts; `None` if the diagram has more than `part_count` parts.
    pub fn multiplicities(&self, part_count: usize) -> Option<Vec<usize>> {
        if self.length() > part_count {
            return None;
        }
        let max = self.parts.first().copied().unwrap_or(0) as usize;
        let mut r = vec![0; max + 1];
        r[0] = part_count - self.length();
        for &p in &self.parts {
            r[p as usize] += 1;
        }
        Some(r)
    }

    /// Parts padded with zeros to `part_count` entries.
    pub fn padded(&self, part_count: usize) -> Vec<u32> {
        let mut v = self.parts.clone();
        v.resize(part_count.max(v.len()), 0);
        v
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Iterator over [`YoungDiagram`]s; see [`enum_young`].
#[derive(Clone, Debug)]
pub struct YoungDiagrams {
    current: Option<Vec<u32>>,
    max_parts: usize,
}

impl YoungDiagrams {
    /// Next partition in reverse lexicographic order.
    fn advance(parts: &mut Vec<u32>) -> bool {
        let Some(i) = parts.iter().rposition(|&p| p > 1) else {
            return false;
        };
        let ones = (parts.len() - i - 1) as u32;
        parts[i] -= 1;
        let v = parts[i];
        let mut rem = ones + 1;
        parts.truncate(i + 1);
        while rem >= v {
            parts.push(v);
            rem -= v;
        }
        if rem > 0 {
            parts.push(rem);
        }
        true
    }
}

impl Iterator for YoungDiagrams {
    type Item = YoungDiagram;

    fn next(&mut self) -> Option<YoungDiagram> {
        loop {
            let out = self.current.clone()?;
            let mut next = out.clone();
            self.current = Self::advance(&mut next).then_some(next);
            if out.len() <= self.max_parts {
                return Some(YoungDiagram { parts: out });
            }
        }
    }
}

/// Every partition of `total` into at most `max_parts` positive parts, in
/// reverse lexicographic order.
pub fn enum_young(total: u32, max_parts: usize) -> YoungDiagrams {
    let current = if total == 0 {
        Some(Vec::new())
    } else if max_parts == 0 {
        None
    } else {
        Some(vec![total])
    };
    YoungDiagrams { current, max_parts }
}

/// A `(k+1) × n` nonnegative integer matrix with `a_ij = 0` for `i > j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadMatrix {
    n: usize,
    k: usize,
    entries: Vec<u32>,
}

impl QuadMatrix {
    /// Row-major entries; structural zeros below the diagonal are enforced.
    pub fn new(n: usize, k: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != (k + 1) * n {
            return Err(Error::domain("entry count must be (k+1)·n"));
        }
        for i in 0..=k {
            for j in 0..n.min(i) {
                if entries[i * n + j] != 0 {
                    return Err(Error::domain(format!(
                        "entry ({}, {}) lies below the diagonal and must be zero",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { n, k, entries })
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.k + 1
    }

    /// Zero-based access.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn row_sums(&self) -> Vec<u32> {
        self.entries.chunks(self.n).map(|r| r.iter().sum()).collect()
    }

    /// Column sums, i.e. the exponent vector `e A`.
    pub fn col_sums(&self) -> Vec<u32> {
        (0..self.n)
            .map(|j| (0..=self.k).map(|i| self.get(i, j)).sum())
            .collect()
    }

    /// Half the column sums; `None` if some column sum is odd.
    pub fn nu(&self) -> Option<OrderedPartition> {
        let cs = self.col_sums();
        cs.iter()
            .all(|c| c % 2 == 0)
            .then(|| OrderedPartition::new(cs.iter().map(|c| c / 2).collect()))
    }

    pub fn total(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// Number of columns with at least one nonzero entry.
    pub fn ell(&self) -> usize {
        self.col_sums().iter().filter(|&&c| c > 0).count()
    }

    /// `(A1)! / A!`: the product over rows of the multinomial coefficient of
    /// that row.
    pub fn factorial_ratio(&self) -> BigInt {
        match self.factorial_ratio_small() {
            Some(v) => BigInt::from(v),
            None => self.factorial_ratio_big(),
        }
    }

    fn factorial_ratio_big(&self) -> BigInt {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for row in self.entries.chunks(self.n) {
            num *= factorial(row.iter().sum::<u32>() as usize);
            for &a in row {
                if a > 1 {
                    den *= factorial(a as usize);
                }
            }
        }
        num / den
    }
}

impl QuadMatrix {
    /// [`Self::factorial_ratio`] in machine integers, `None` on overflow.
    fn factorial_ratio_small(&self) -> Option<u128> {
        let table = small_factorials();
        let mut acc: u128 = 1;
        for row in self.entries.chunks(self.n) {
            let total = row.iter().sum::<u32>() as usize;
            let mut multinomial = *table.get(total)?;
            for &a in row {
                multinomial /= table[a as usize];
            }
            acc = acc.checked_mul(multinomial)?;
        }
        Some(acc)
    }
}

/// `0!, 1!, …` up to the largest factorial that fits in a `u128`.
fn small_factorials() -> &'static [u128] {
    static TABLE: OnceLock<Vec<u128>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![1u128];
        while let Some(next) = t[t.len() - 1].checked_mul(t.len() as u128) {
            t.push(next);
        }
        t
    })
}

impl fmt::Display for QuadMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .chunks(self.n)
            .map(|r| format!("{r:?}"))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Iterator over the matrices of [`enum_matrices_colsums`].
///
/// Column `j` (zero-based) has `min(j+1, k+1)` free entries; each column
/// runs through its compositions like an odometer digit, last column fastest.
#[derive(Clone, Debug)]
pub struct ColumnSumMatrices {
    n: usize,
    k: usize,
    sums: Vec<u32>,
    columns: Vec<Vec<u32>>,
    started: bool,
    done: bool,
}

impl ColumnSumMatrices {
    fn build(&self) -> QuadMatrix {
        let mut entries = vec![0; (self.k + 1) * self.n];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, &a) in col.iter().enumerate() {
                entries[i * self.n + j] = a;
            }
        }
        QuadMatrix {
            n: self.n,
            k: self.k,
            entries,
        }
    }
}

impl Iterator for ColumnSumMatrices {
    type Item = QuadMatrix;

    fn next(&mut self) -> Option<QuadMatrix> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.build());
        }
        for j in (0..self.n).rev() {
            if next_composition(&mut self.columns[j]) {
                return Some(self.build());
            }
            self.columns[j] = first_composition(self.sums[j], self.columns[j].len());
        }
        self.done = true;
        None
    }
}

/// Every `(k+1) × n` upper quadrilateral matrix whose `j`-th column sums to
/// `col_sums[j]`.
pub fn enum_matrices_colsums(n: usize, k: usize, col_sums: &OrderedPartition) -> Result<ColumnSumMatrices> {
    if col_sums.len() != n {
        return Err(Error::domain(format!(
            "expected {n} column sums, got {}",
            col_sums.len()
        )));
    }
    let sums = col_sums.parts().to_vec();
    let columns = (0..n)
        .map(|j| first_composition(sums[j], (j + 1).min(k + 1)))
        .collect();
    Ok(ColumnSumMatrices {
        n,
        k,
        sums,
        columns,
        started: false,
        done: n == 0,
    })
}

/// Every `(k+1) × n` upper quadrilateral matrix with entry total `total` and
/// all column sums even, grouped by `ν = (column sums)/2` in the order of
/// [`enum_ordered_partitions`].
pub fn enum_matrices_even(n: usize, k: usize, total: u32) -> Result<impl Iterator<Item = QuadMatrix>> {
    if !total.is_multiple_of(2) {
        return Err(Error::domain("even-column matrices need an even total"));
    }
    Ok(enum_ordered_partitions(total / 2, n).flat_map(move |nu| {
        enum_matrices_colsums(n, k, &nu.doubled()).expect("partition has n parts")
    }))
}

/// Every `(k+1) × n` upper quadrilateral matrix with entry total `total`.
pub fn enum_matrices_total(n: usize, k: usize, total: u32) -> impl Iterator<Item = QuadMatrix> {
    enum_ordered_partitions(total, n)
        .flat_map(move |cs| enum_matrices_colsums(n, k, &cs).expect("partition has n parts"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(it: impl Iterator<Item = OrderedPartition>) -> Vec<Vec<u32>> {
        it.map(|p| p.parts().to_vec()).collect()
    }

    #[test]
    fn ordered_partitions_small() {
        assert_eq!(
            parts(enum_ordered_partitions(2, 2)),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(parts(enum_ordered_partitions(0, 3)), vec![vec![0, 0, 0]]);
        assert_eq!(enum_ordered_partitions(3, 2).count(), 4);
        assert_eq!(parts(enum_ordered_partitions(4, 1)), vec![vec![4]]);
    }

    #[test]
    fn ordered_partition_counts_match_binomial() {
        for total in 0..7u32 {
            for len in 1..6usize {
                let count = enum_ordered_partitions(total, len).count();
                let expected = binomial(total as usize + len - 1, len - 1);
                assert_eq!(BigInt::from(count), expected, "total {total}, parts {len}");
            }
        }
    }

    #[test]
    fn young_small() {
        let ys: Vec<Vec<u32>> = enum_young(2, 2).map(|y| y.parts().to_vec()).collect();
        assert_eq!(ys, vec![vec![2], vec![1, 1]]);
        assert_eq!(enum_young(4, 4).count(), 5);
        let ys: Vec<Vec<u32>> = enum_young(3, 2).map(|y| y.padded(2)).collect();
        assert_eq!(ys, vec![vec![3, 0], vec![2, 1]]);
        assert_eq!(enum_young(0, 3).count(), 1);
    }

    #[test]
    fn young_counts_are_partition_numbers() {
        let p = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (m, &expected) in p.iter().enumerate() {
            assert_eq!(enum_young(m as u32, m.max(1)).count(), expected);
        }
    }

    #[test]
    fn multiplicity_view() {
        let y = YoungDiagram::new(vec![2, 1, 1]).unwrap();
        assert_eq!(y.multiplicities(5), Some(vec![2, 2, 1]));
        assert_eq!(y.multiplicities(2), None);
        assert_eq!(y.weight(), 4);
        assert_eq!(y.length(), 3);
        assert_eq!(YoungDiagram::from_multiplicities(&[2, 2, 1]), y);
        assert_eq!(YoungDiagram::new(vec![2, 1, 0]).unwrap(), YoungDiagram::new(vec![2, 1]).unwrap());
        assert!(YoungDiagram::new(vec![1, 2]).is_err());
    }

    #[test]
    fn column_sum_matrices() {
        let one: Vec<QuadMatrix> =
            enum_matrices_colsums(2, 1, &OrderedPartition::new(vec![2, 0])).unwrap().collect();
        assert_eq!(one, vec![QuadMatrix::new(2, 1, vec![2, 0, 0, 0]).unwrap()]);

        let three: Vec<(u32, u32)> = enum_matrices_colsums(2, 1, &OrderedPartition::new(vec![0, 2]))
            .unwrap()
            .map(|a| (a.get(0, 1), a.get(1, 1)))
            .collect();
        assert_eq!(three, vec![(2, 0), (1, 1), (0, 2)]);

        let single: Vec<QuadMatrix> =
            enum_matrices_colsums(1, 0, &OrderedPartition::new(vec![5])).unwrap().collect();
        assert_eq!(single, vec![QuadMatrix::new(1, 0, vec![5]).unwrap()]);

        assert!(enum_matrices_colsums(2, 1, &OrderedPartition::new(vec![1])).is_err());
    }

    #[test]
    fn even_matrices() {
        let ms: Vec<QuadMatrix> = enum_matrices_even(2, 0, 2).unwrap().collect();
        assert_eq!(
            ms,
            vec![
                QuadMatrix::new(2, 0, vec![2, 0]).unwrap(),
                QuadMatrix::new(2, 0, vec![0, 2]).unwrap()
            ]
        );
        assert_eq!(enum_matrices_even(2, 1, 2).unwrap().count(), 4);
        for (n, k) in [(1, 0), (3, 2), (4, 4)] {
            let zero: Vec<QuadMatrix> = enum_matrices_even(n, k, 0).unwrap().collect();
            assert_eq!(zero.len(), 1);
            assert_eq!(zero[0].total(), 0);
        }
        assert!(enum_matrices_even(2, 1, 3).is_err());
    }

    #[test]
    fn structural_zeros_are_enforced() {
        assert!(QuadMatrix::new(2, 1, vec![0, 0, 1, 0]).is_err());
        assert!(QuadMatrix::new(2, 1, vec![0, 0, 0]).is_err());
        let a = QuadMatrix::new(3, 2, vec![1, 0, 2, 0, 3, 0, 0, 0, 1]).unwrap();
        assert_eq!(a.row_sums(), vec![3, 3, 1]);
        assert_eq!(a.col_sums(), vec![1, 3, 3]);
        assert_eq!(a.ell(), 3);
        assert_eq!(a.nu(), None);
        // 3!/(1!0!2!) * 3!/3! * 1!/1! = 3
        assert_eq!(a.factorial_ratio(), BigInt::from(3));
    }

    #[test]
    fn even_stream_structure() {
        for n in 1..=4usize {
            for k in 0..=n {
                for m in 0..=3u32 {
                    let mut count = 0usize;
                    for a in enum_matrices_even(n, k, 2 * m).unwrap() {
                        count += 1;
                        assert_eq!(a.total(), 2 * m);
                        let nu = a.nu().expect("even columns");
                        assert_eq!(nu.total(), m);
                        assert_eq!(a.ell(), nu.ell());
                        for i in 0..=k {
                            for j in 0..n.min(i) {
                                assert_eq!(a.get(i, j), 0);
                            }
                        }
                    }
                    let by_parts: usize = enum_ordered_partitions(m, n)
                        .map(|nu| enum_matrices_colsums(n, k, &nu.doubled()).unwrap().count())
                        .sum();
                    assert_eq!(count, by_parts);
                }
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a: Vec<QuadMatrix> = enum_matrices_even(3, 2, 4).unwrap().collect();
        let b: Vec<QuadMatrix> = enum_matrices_even(3, 2, 4).unwrap().collect();
        assert_eq!(a, b);
        let set: std::collections::HashSet<_> = a.iter().cloned().collect();
        assert_eq!(set.len(), a.len());
    }

    #[test]
    fn factorial_ratio_fast_path_matches_bigint() {
        for n in 1..=4 {
            for k in 0..=n {
                for a in enum_matrices_total(n, k, 6) {
                    assert_eq!(BigInt::from(a.factorial_ratio_small().unwrap()), a.factorial_ratio_big());
                }
            }
        }
        // 40 in one row overflows u128 and takes the BigInt path
        let big = QuadMatrix::new(2, 0, vec![20, 20]).unwrap();
        assert!(big.factorial_ratio_small().is_none());
        assert_eq!(big.factorial_ratio(), binomial(40, 20));
    }
}
