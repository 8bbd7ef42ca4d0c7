use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_rational::BigRational;
use num_traits::{One, Zero};

/// A finite linear combination of generators of one arity.
///
/// Generators are referred to by their index in the arity's sorted basis.
/// Only nonzero coefficients are stored. All zero elements compare equal,
/// whatever arity they were created with.
#[derive(Clone, Debug)]
pub struct OperadElement {
    arity: usize,
    terms: BTreeMap<usize, BigRational>,
}

impl PartialEq for OperadElement {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.arity == other.arity && self.terms == other.terms
    }
}

impl Eq for OperadElement {}

impl OperadElement {
    pub fn zero(arity: usize) -> Self {
        OperadElement { arity, terms: BTreeMap::new() }
    }

    pub fn basis(arity: usize, index: usize) -> Self {
        Self::from_terms(arity, [(index, BigRational::one())])
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (usize, BigRational)>) -> Self {
        let mut el = Self::zero(arity);
        for (i, c) in terms {
            el.add_term(i, &c);
        }
        el
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn coefficient(&self, index: usize) -> BigRational {
        self.terms.get(&index).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, index: usize, coeff: &BigRational) {
        if coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(index).or_insert_with(BigRational::zero);
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&index);
        }
    }

    /// `self += coeff * other`.
    ///
    /// Panics when both elements are nonzero and of different arity.
    pub fn add_scaled(&mut self, other: &OperadElement, coeff: &BigRational) {
        if other.is_zero() || coeff.is_zero() {
            return;
        }
        if self.is_zero() {
            self.arity = other.arity;
        }
        assert_eq!(self.arity, other.arity, "adding elements of arity {} and {}", self.arity, other.arity);
        for (i, c) in &other.terms {
            self.add_term(*i, &(c * coeff));
        }
    }

    pub fn scaled(&self, coeff: &BigRational) -> Self {
        if coeff.is_zero() {
            return Self::zero(self.arity);
        }
        OperadElement { arity: self.arity, terms: self.terms.iter().map(|(&i, c)| (i, c * coeff)).collect() }
    }

    /// Multiplies by `(-1)^exponent`.
    pub fn signed(self, exponent: i64) -> Self {
        if exponent.rem_euclid(2) == 1 {
            -self
        } else {
            self
        }
    }

    /// Coefficient vector in the arity's full basis of size `rank`.
    pub fn to_dense(&self, rank: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); rank];
        for (&i, c) in &self.terms {
            v[i] = c.clone();
        }
        v
    }
}

impl Neg for OperadElement {
    type Output = OperadElement;

    fn neg(mut self) -> OperadElement {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl AddAssign<&OperadElement> for OperadElement {
    fn add_assign(&mut self, rhs: &OperadElement) {
        self.add_scaled(rhs, &BigRational::one());
    }
}

impl SubAssign<&OperadElement> for OperadElement {
    fn sub_assign(&mut self, rhs: &OperadElement) {
        self.add_scaled(rhs, &-BigRational::one());
    }
}

impl Add for OperadElement {
    type Output = OperadElement;

    fn add(mut self, rhs: OperadElement) -> OperadElement {
        self += &rhs;
        self
    }
}

impl Sub for OperadElement {
    type Output = OperadElement;

    fn sub(mut self, rhs: OperadElement) -> OperadElement {
        self -= &rhs;
        self
    }
}

/// `(-1)^e` as a rational.
pub fn sign(e: i64) -> BigRational {
    if e.rem_euclid(2) == 1 {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut a = OperadElement::basis(2, 0);
        a -= &OperadElement::basis(2, 0);
        assert!(a.is_zero());
        assert_eq!(a, OperadElement::zero(5));
    }

    #[test]
    fn zero_adopts_arity() {
        let mut z = OperadElement::zero(0);
        z += &OperadElement::basis(3, 1);
        assert_eq!(z.arity(), 3);
        assert_eq!(z.coefficient(1), q(1));
    }

    #[test]
    #[should_panic]
    fn mixed_arity_sum_panics() {
        let mut a = OperadElement::basis(1, 0);
        a += &OperadElement::basis(2, 0);
    }

    #[test]
    fn signs() {
        let a = OperadElement::from_terms(1, [(0, q(2))]);
        assert_eq!(a.clone().signed(3).coefficient(0), q(-2));
        assert_eq!(a.signed(-2).coefficient(0), q(2));
        assert_eq!(sign(-1), q(-1));
    }
}
