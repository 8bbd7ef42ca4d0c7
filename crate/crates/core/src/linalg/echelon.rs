use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::RatMatrix;
use crate::error::{Error, Result};

/// Sparse rational vector: index -> nonzero coefficient.
pub type SparseVec = BTreeMap<usize, BigRational>;

fn axpy(dst: &mut SparseVec, factor: &BigRational, src: &SparseVec) {
    for (i, v) in src {
        let e = dst.entry(*i).or_insert_with(BigRational::zero);
        *e += factor * v;
        if e.is_zero() {
            dst.remove(i);
        }
    }
}

#[derive(Clone)]
struct Pivot {
    /// Column-space vector with leading coefficient 1.
    image: SparseVec,
    /// Combination of source columns producing `image`.
    combination: SparseVec,
}

/// Echelon form of the column space of a rational matrix, with the column
/// combinations that produced it.
///
/// Built once per matrix, then answers rank, kernel and solve queries. Pivots
/// are keyed by leading row index, so reduction only ever looks at the
/// leading entry.
#[derive(Clone)]
pub struct ColumnSpace {
    rows: usize,
    cols: usize,
    pivots: BTreeMap<usize, Pivot>,
    kernel: Vec<SparseVec>,
}

impl ColumnSpace {
    pub fn new(a: &RatMatrix) -> Self {
        let columns = a.columns();
        let mut space = ColumnSpace { rows: a.rows(), cols: a.cols(), pivots: BTreeMap::new(), kernel: Vec::new() };
        for (j, col) in columns.into_iter().enumerate() {
            let image: SparseVec = col.into_iter().collect();
            let combination: SparseVec = [(j, BigRational::one())].into_iter().collect();
            space.insert(image, combination);
        }
        space
    }

    fn insert(&mut self, mut image: SparseVec, mut combination: SparseVec) {
        self.reduce(&mut image, &mut combination);
        match image.first_key_value() {
            None => self.kernel.push(combination),
            Some((&lead, lead_val)) => {
                let inv = lead_val.recip();
                for v in image.values_mut() {
                    *v *= &inv;
                }
                for v in combination.values_mut() {
                    *v *= &inv;
                }
                self.pivots.insert(lead, Pivot { image, combination });
            }
        }
    }

    /// Top-reduces `image` against the pivots, mirroring every step on `combination`.
    fn reduce(&self, image: &mut SparseVec, combination: &mut SparseVec) {
        while let Some((&lead, val)) = image.first_key_value() {
            let Some(p) = self.pivots.get(&lead) else { break };
            let f = -val.clone();
            axpy(image, &f, &p.image);
            axpy(combination, &f, &p.combination);
        }
    }

    /// Appends a column; returns whether it raised the rank.
    pub fn push_column(&mut self, col: SparseVec) -> bool {
        let j = self.cols;
        self.cols += 1;
        let before = self.rank();
        self.insert(col, [(j, BigRational::one())].into_iter().collect());
        self.rank() > before
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Kernel vectors found while building; `cols - rank` of them.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    /// Returns `x` with `A x = b`, or `None` when `b` is not in the column space.
    pub fn solve_sparse(&self, b: &SparseVec) -> Option<SparseVec> {
        let mut image = b.clone();
        let mut x = SparseVec::new();
        self.reduce(&mut image, &mut x);
        if image.is_empty() {
            // reduce accumulated -x
            for v in x.values_mut() {
                *v = -v.clone();
            }
            Some(x)
        } else {
            None
        }
    }

    pub fn solve(&self, b: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for a matrix with {} rows",
                b.len(),
                self.rows
            )));
        }
        let sparse: SparseVec =
            b.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect();
        Ok(self.solve_sparse(&sparse).map(|x| densify(&x, self.cols)))
    }

    /// True when `b` lies in the column space.
    pub fn contains(&self, b: &SparseVec) -> bool {
        let mut image = b.clone();
        let mut scratch = SparseVec::new();
        self.reduce(&mut image, &mut scratch);
        image.is_empty()
    }
}

pub fn densify(v: &SparseVec, len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// A basis of `ker A` over the rationals, each vector scaled to a primitive
/// integer vector. Its size is `cols - rank(A)`.
pub fn kernel_basis(a: &RatMatrix) -> Vec<Vec<BigRational>> {
    ColumnSpace::new(a).kernel().iter().map(|k| super::primitive(&densify(k, a.cols()))).collect()
}

/// Some `x` with `A x = b` over the rationals, or `None` when `b` is not in the image.
pub fn solve_in_image(a: &RatMatrix, b: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    ColumnSpace::new(a).solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn rat(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn kernel_of_row_vector() {
        let k = kernel_basis(&rat(&[&[1, 1]]));
        assert_eq!(k.len(), 1);
        // up to scale (1, -1)
        assert_eq!(&k[0][0] + &k[0][1], q(0));
        assert!(!k[0][0].is_zero());
    }

    #[test]
    fn injective_maps_have_trivial_kernel() {
        assert!(kernel_basis(&RatMatrix::identity(2)).is_empty());
        assert!(kernel_basis(&rat(&[&[2, 4], &[6, 8]])).is_empty());
    }

    #[test]
    fn solve_examples() {
        let x = solve_in_image(&rat(&[&[1, 1]]), &[q(3)]).unwrap().unwrap();
        assert_eq!(&x[0] + &x[1], q(3));

        let x = solve_in_image(&rat(&[&[2]]), &[q(1)]).unwrap().unwrap();
        assert_eq!(x, vec![BigRational::new(1.into(), 2.into())]);

        assert_eq!(solve_in_image(&rat(&[&[0]]), &[q(1)]).unwrap(), None);
    }

    #[test]
    fn solve_rejects_wrong_length() {
        assert!(matches!(solve_in_image(&rat(&[&[1, 1]]), &[q(1), q(2)]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn rank_of_dependent_columns() {
        assert_eq!(rank(&rat(&[&[1, 2, 3], &[2, 4, 6]])), 1);
        assert_eq!(rank(&RatMatrix::zeros(3, 0)), 0);
    }
}
