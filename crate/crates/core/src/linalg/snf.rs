use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `u * a * v == d` with `u`, `v` unimodular and `d` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_r`, all positive.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i)).take_while(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

type Dense = Vec<Vec<BigInt>>;

fn swap_cols(m: &mut Dense, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// row[dst] -= q * row[src]
fn sub_row(m: &mut Dense, dst: usize, src: usize, q: &BigInt) {
    let (src_row, dst_row) = if src < dst {
        let (a, b) = m.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = m.split_at_mut(src);
        (&b[0], &mut a[dst])
    };
    for (d, s) in dst_row.iter_mut().zip(src_row) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

/// col[dst] -= q * col[src]
fn sub_col(m: &mut Dense, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    }
}

fn identity(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn to_matrix(m: Dense, rows: usize, cols: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(rows, cols);
    for (r, row) in m.into_iter().enumerate() {
        for (c, v) in row.into_iter().enumerate() {
            out.set(r, c, v);
        }
    }
    out
}

/// Smith normal form over the integers.
///
/// Pivots on the smallest nonzero entry (in absolute value) of the active
/// block to keep entries small.
pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.to_dense();
    let mut u = identity(rows);
    let mut v = identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = min_abs_position(&d, t..rows, t..cols) else {
            break;
        };
        d.swap(t, pr);
        u.swap(t, pr);
        swap_cols(&mut d, t, pc);
        swap_cols(&mut v, t, pc);

        loop {
            // Clear column t and row t by division with remainder.
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = &d[i][t] / &d[t][t];
                    sub_row(&mut d, i, t, &q);
                    sub_row(&mut u, i, t, &q);
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = &d[t][j] / &d[t][t];
                    sub_col(&mut d, j, t, &q);
                    sub_col(&mut v, j, t, &q);
                }
            }

            // A nonzero remainder is smaller than the pivot: make it the pivot.
            let col_rem = (t + 1..rows).filter(|&i| !d[i][t].is_zero()).min_by_key(|&i| d[i][t].abs());
            let row_rem = (t + 1..cols).filter(|&j| !d[t][j].is_zero()).min_by_key(|&j| d[t][j].abs());
            match (col_rem, row_rem) {
                (Some(i), Some(j)) if d[t][j].abs() < d[i][t].abs() => {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                    continue;
                }
                (Some(i), _) => {
                    d.swap(t, i);
                    u.swap(t, i);
                    continue;
                }
                (None, Some(j)) => {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                    continue;
                }
                (None, None) => {}
            }

            // Enforce divisibility of the remaining block by the pivot.
            let bad_row = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad_row {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    sub_row(&mut d, t, i, &minus_one);
                    sub_row(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }

        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }

    SmithDecomposition { u: to_matrix(u, rows, rows), d: to_matrix(d, rows, cols), v: to_matrix(v, cols, cols) }
}

fn min_abs_position(d: &Dense, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = &d[i][j];
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// A basis of the integer kernel lattice `{x in Z^n : A x = 0}`.
///
/// These are the trailing columns of `V` in `U A V = D`; they form a basis of
/// the saturated lattice, not merely of the rational kernel.
pub fn integer_kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let dec = snf(a);
    let r = dec.rank();
    let v = dec.v.to_dense();
    (r..a.cols()).map(|c| v.iter().map(|row| row[c].clone()).collect()).collect()
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
///
/// Panics on a non-square matrix.
pub fn determinant(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows(), a.cols(), "determinant of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.to_dense();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()).unwrap()
    }

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let dec = snf(a);
        assert_eq!(dec.u.mul(a).unwrap().mul(&dec.v).unwrap(), dec.d);
        assert_eq!(determinant(&dec.u).abs(), BigInt::one());
        assert_eq!(determinant(&dec.v).abs(), BigInt::one());
        dec
    }

    #[test]
    fn zero_one_by_one() {
        let dec = check(&int(&[&[0]]));
        assert_eq!(dec.d, int(&[&[0]]));
        assert_eq!(dec.u, int(&[&[1]]));
        assert_eq!(dec.v, int(&[&[1]]));
    }

    #[test]
    fn two_by_two() {
        let dec = check(&int(&[&[2, 4], &[6, 8]]));
        assert_eq!(dec.d, int(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn identity_is_fixed() {
        let id = IntMatrix::identity(3);
        assert_eq!(check(&id).d, id);
    }

    #[test]
    fn divisibility_fix_up() {
        // diag(2, 3) is diagonal but not in normal form: SNF is diag(1, 6).
        let dec = check(&int(&[&[2, 0], &[0, 3]]));
        assert_eq!(dec.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn empty_matrices() {
        let dec = snf(&IntMatrix::zeros(0, 3));
        assert_eq!(dec.v, IntMatrix::identity(3));
        assert_eq!(dec.u.rows(), 0);
        assert_eq!(integer_kernel_basis(&IntMatrix::zeros(0, 2)).len(), 2);
    }

    #[test]
    fn kernel_lattice_is_saturated() {
        // ker [2 4] over Z is spanned by (2, -1), not by (4, -2).
        let k = integer_kernel_basis(&int(&[&[2, 4]]));
        assert_eq!(k.len(), 1);
        let g = k[0][0].gcd(&k[0][1]);
        assert_eq!(g, BigInt::one());
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(determinant(&int(&[&[2, 4], &[6, 8]])), BigInt::from(-8));
        assert_eq!(determinant(&int(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]])), BigInt::from(-5));
        assert_eq!(determinant(&int(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }
}
