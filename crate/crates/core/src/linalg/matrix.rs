use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact scalar: implemented for `BigInt` and `BigRational`.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Send
        + Sync
{
}

/// Sparse matrix with exact entries, stored as `(row, col) -> value` triplets.
///
/// Only nonzero entries are stored and every index is within bounds.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix<T> {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), T>,
}

pub type IntMatrix = ExactMatrix<BigInt>;
pub type RatMatrix = ExactMatrix<BigRational>;

impl<T: Scalar> ExactMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), T::one());
        }
        m
    }

    /// Builds a matrix from dense rows. All rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(n_rows, n_cols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch(format!("row {r} has {} entries, expected {n_cols}", row.len())));
            }
            for (c, v) in row.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch(format!("entry ({r}, {c}) outside a {rows}x{cols} matrix")));
            }
            let cur = m.get(r, c);
            m.set(r, c, cur + v);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(T::zero)
    }

    /// Sets an entry; setting zero removes it.
    ///
    /// Panics if the position is out of bounds.
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        assert!(r < self.rows && c < self.cols, "({r}, {c}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    /// Nonzero entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    /// Nonzero entries of each column, indexed by column.
    pub fn columns(&self) -> Vec<Vec<(usize, T)>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (&(r, c), v) in &self.entries {
            cols[c].push((r, v.clone()));
        }
        cols
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: Vec<Vec<(usize, &T)>> = vec![Vec::new(); other.rows];
        for (&(r, c), v) in &other.entries {
            by_row[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (&(r, k), a) in &self.entries {
            for &(c, b) in &by_row[k] {
                let slot = acc.entry((r, c)).or_insert_with(T::zero);
                *slot = slot.clone() + a.clone() * b.clone();
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(ExactMatrix { rows: self.rows, cols: other.cols, entries: acc })
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![T::zero(); self.rows];
        for (&(r, c), a) in &self.entries {
            out[r] = out[r].clone() + a.clone() * v[c].clone();
        }
        Ok(out)
    }

    /// Columns of `self` followed by the columns of `other`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!("hstack of {} and {} rows", self.rows, other.rows)));
        }
        let mut m = self.clone();
        m.cols += other.cols;
        for (&(r, c), v) in &other.entries {
            m.entries.insert((r, c + self.cols), v.clone());
        }
        Ok(m)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ExactMatrix<U> {
        let mut m = ExactMatrix::zeros(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            m.set(r, c, f(v));
        }
        m
    }
}

impl IntMatrix {
    pub fn to_rational(&self) -> RatMatrix {
        self.map(|v| BigRational::from_integer(v.clone()))
    }
}

impl RatMatrix {
    /// Converts to an integer matrix if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.entries.values().any(|v| !v.is_integer()) {
            return None;
        }
        Some(self.map(|v| v.to_integer()))
    }
}

impl<T: Scalar> fmt::Debug for ExactMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for (i, row) in self.to_dense().iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn zero_entries_are_not_stored() {
        let m = int(&[&[0, 1], &[0, 0]]);
        assert_eq!(m.nnz(), 1);
        let mut m = m;
        m.set(0, 1, BigInt::zero());
        assert!(m.is_zero());
    }

    #[test]
    fn product_and_transpose() {
        let a = int(&[&[1, 2], &[3, 4]]);
        let b = int(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), int(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), int(&[&[1, 3], &[2, 4]]));
        assert!(a.mul(&int(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![BigInt::one()], vec![BigInt::one(), BigInt::one()]];
        assert!(matches!(IntMatrix::from_rows(rows), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn triplets_accumulate_and_check_bounds() {
        let m =
            IntMatrix::from_triplets(2, 2, [(0, 0, BigInt::from(2)), (0, 0, BigInt::from(-2)), (1, 1, BigInt::one())])
                .unwrap();
        assert_eq!(m.nnz(), 1);
        assert!(IntMatrix::from_triplets(1, 1, [(1, 0, BigInt::one())]).is_err());
    }
}
