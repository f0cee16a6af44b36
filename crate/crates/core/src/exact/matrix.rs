//! Dense matrices over a field and exact Gaussian elimination.

use std::fmt;

use super::scalar::Field;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Result of [`Matrix::solve_or_rank`].
#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome<F> {
    Rank(usize),
    Unique(Vec<F>),
    /// Consistent, but with `cols - rank` free parameters.
    Underdetermined { rank: usize },
    /// No solution exists.
    Inconsistent,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("ragged rows"));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self
                .get(row, col)
                .unit_inverse()
                .expect("nonzero field element is invertible");
            for c in col..self.cols {
                let v = self.get(row, c).clone() * inv.clone();
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for c in col..self.cols {
                    let v = self.get(r, c).clone() - factor.clone() * self.get(row, c).clone();
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    /// Exact elimination: with a right-hand side, solves `self * x = rhs`;
    /// without one, reports the rank.
    pub fn solve_or_rank(&self, rhs: Option<&[F]>) -> Result<SolveOutcome<F>> {
        let Some(rhs) = rhs else {
            return Ok(SolveOutcome::Rank(self.rank()));
        };
        if rhs.len() != self.rows {
            return Err(Error::domain(format!(
                "right-hand side has length {}, expected {}",
                rhs.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for (r, b) in rhs.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b.clone());
        }
        let pivots = aug.reduce();
        if pivots.last() == Some(&self.cols) {
            return Ok(SolveOutcome::Inconsistent);
        }
        let rank = pivots.len();
        if rank < self.cols {
            return Ok(SolveOutcome::Underdetermined { rank });
        }
        Ok(SolveOutcome::Unique(
            (0..self.cols).map(|r| aug.get(r, self.cols).clone()).collect(),
        ))
    }

    /// The unique solution of `self * x = rhs`, or an error naming why none exists.
    pub fn solve(&self, rhs: &[F]) -> Result<Vec<F>> {
        match self.solve_or_rank(Some(rhs))? {
            SolveOutcome::Unique(x) => Ok(x),
            SolveOutcome::Inconsistent => Err(Error::NoSolution),
            SolveOutcome::Underdetermined { rank } => Err(Error::Underdetermined {
                rank,
                unknowns: self.cols,
            }),
            SolveOutcome::Rank(_) => unreachable!("rhs was supplied"),
        }
    }
}

/// Incrementally maintained echelon basis of a row space.
///
/// Rows are kept fully reduced against each other, so membership tests are
/// a single reduction pass.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F> {
    width: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<F>) -> Vec<F> {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - f.clone() * r.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: Vec<F>) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v` if it is independent of the current rows; returns whether it was.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        assert_eq!(v.len(), self.width, "row width mismatch");
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].unit_inverse().expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for (_, row) in self.rows.iter_mut() {
            if row[pivot].is_zero() {
                continue;
            }
            let f = row[pivot].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                *x = x.clone() - f.clone() * r.clone();
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

impl<F: Field + fmt::Display> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
