//! Exact linear algebra over the integers and the rationals.
//!
//! Everything here is exact: integers are arbitrary precision and rationals
//! are reduced fractions of those. There is no floating point anywhere.

mod echelon;
mod matrix;
mod snf;

pub use echelon::{densify, kernel_basis, solve_in_image, ColumnSpace, SparseVec};
pub use matrix::{ExactMatrix, IntMatrix, RatMatrix, Scalar};
pub use snf::{determinant, integer_kernel_basis, snf, SmithDecomposition};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rank over the rationals.
pub fn rank(a: &RatMatrix) -> usize {
    ColumnSpace::new(a).rank()
}

/// Scales a rational vector to a primitive integer vector with the same span
/// and a positive last nonzero entry.
pub fn primitive(v: &[BigRational]) -> Vec<BigRational> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v.iter().filter(|x| !x.is_zero()) {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    if ints.iter().rev().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect()
}
