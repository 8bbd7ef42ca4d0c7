//! The cosimplicial structure of a multiplicative operad and its Hochschild
//! complex.
//!
//! Cofaces are `d^0 x = μ ∘_2 x`, `d^i x = x ∘_i μ` for `1 <= i <= k` and
//! `d^{k+1} x = μ ∘_1 x`; codegeneracies are `s^i x = x ∘_{i+1} e`. The
//! differential is `∂ = Σ (-1)^i d^i`, and the normalized complex is the
//! intersection of the kernels of all `s^i`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{integer_kernel_basis, kernel_basis, ColumnSpace, IntMatrix, RatMatrix, SparseVec};
use crate::operad::{OperadElement, OperadSpec, Ring};

/// `d^i x` for `x` of arity `k` and `0 <= i <= k + 1`.
pub fn coface(spec: &OperadSpec, i: usize, x: &OperadElement) -> Result<OperadElement> {
    let k = x.arity();
    if i > k + 1 {
        return Err(Error::IndexOutOfRange { index: i, min: 0, max: k + 1 });
    }
    let mu = spec.multiplication();
    if i == 0 {
        spec.compose(mu, 2, x)
    } else if i == k + 1 {
        spec.compose(mu, 1, x)
    } else {
        spec.compose(x, i, mu)
    }
}

/// `s^i x = x ∘_{i+1} e` for `x` of arity `k + 1` and `0 <= i <= k`.
pub fn codegeneracy(spec: &OperadSpec, i: usize, x: &OperadElement) -> Result<OperadElement> {
    let arity = x.arity();
    if arity == 0 {
        return Err(Error::InvalidInput("arity 0 has no codegeneracies".into()));
    }
    if i >= arity {
        return Err(Error::IndexOutOfRange { index: i, min: 0, max: arity - 1 });
    }
    spec.compose(x, i + 1, spec.unit())
}

/// The Hochschild differential `∂_k = Σ_{i=0}^{k+1} (-1)^i d^i`.
pub fn hochschild_differential(spec: &OperadSpec, x: &OperadElement) -> Result<OperadElement> {
    let k = x.arity();
    if k + 1 > spec.arity_cap() {
        return Err(Error::Truncation { needed: k + 1, cap: spec.arity_cap() });
    }
    let mut out = OperadElement::zero(k + 1);
    for i in 0..=k + 1 {
        let di = coface(spec, i, x)?;
        out += &di.signed(i as i64);
    }
    Ok(out)
}

/// The first codegeneracy that does not annihilate `x`, if any.
pub fn degeneracy_witness(spec: &OperadSpec, x: &OperadElement) -> Option<(usize, OperadElement)> {
    if x.is_zero() {
        return None;
    }
    (0..x.arity()).find_map(|i| {
        let s = codegeneracy(spec, i, x).expect("index in range");
        (!s.is_zero()).then_some((i, s))
    })
}

/// `s^i x = 0` for all `0 <= i < arity` (vacuous at arity 0).
pub fn is_normalized(spec: &OperadSpec, x: &OperadElement) -> bool {
    degeneracy_witness(spec, x).is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Full,
    Normalized,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Full => "full",
            Flavor::Normalized => "normalized",
        })
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Flavor> {
        match s {
            "full" => Ok(Flavor::Full),
            "normalized" => Ok(Flavor::Normalized),
            other => Err(Error::InvalidInput(format!("unknown flavor {other:?} (expected full or normalized)"))),
        }
    }
}

/// One bidegree `(arity, grading)` of the chain complex.
pub struct ChainBlock {
    pub arity: usize,
    pub grading: i64,
    /// Generators of `O(arity)` in this grading.
    pub generators: Vec<usize>,
    /// Basis of the chain group, as elements of `O(arity)`.
    pub basis: Vec<OperadElement>,
    /// Column space of `basis`, for coordinates; `None` when `basis` is the
    /// generator basis itself.
    solver: Option<ColumnSpace>,
}

impl fmt::Debug for ChainBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChainBlock")
            .field("arity", &self.arity)
            .field("grading", &self.grading)
            .field("generators", &self.generators)
            .field("dim", &self.basis.len())
            .finish()
    }
}

impl ChainBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Total degree `grading - arity`.
    pub fn degree(&self) -> i64 {
        self.grading - self.arity as i64
    }

    /// Coordinates of `x` in the chain basis, or `None` when `x` is not in
    /// the chain group (e.g. not normalized).
    pub fn coordinates(&self, x: &OperadElement) -> Option<Vec<BigRational>> {
        if !x.is_zero() && x.arity() != self.arity {
            return None;
        }
        let mut local = SparseVec::new();
        for (i, c) in x.terms() {
            let pos = self.generators.binary_search(&i).ok()?;
            local.insert(pos, c.clone());
        }
        match &self.solver {
            None => Some(crate::linalg::densify(&local, self.dim())),
            Some(space) => space.solve_sparse(&local).map(|v| crate::linalg::densify(&v, self.dim())),
        }
    }

    /// The element with the given coordinates.
    pub fn element(&self, coords: &[BigRational]) -> OperadElement {
        let mut out = OperadElement::zero(self.arity);
        for (c, b) in coords.iter().zip(&self.basis) {
            out.add_scaled(b, c);
        }
        out
    }
}

/// The Hochschild complex, block by bidegree, with `∂` as exact matrices.
pub struct BigradedComplex<'a> {
    spec: &'a OperadSpec,
    flavor: Flavor,
    cap: usize,
    blocks: BTreeMap<(usize, i64), ChainBlock>,
    /// `∂: (k, g) -> (k + 1, g)` for `k + 1 <= cap`; rows index the target basis.
    differentials: BTreeMap<(usize, i64), RatMatrix>,
}

impl fmt::Debug for BigradedComplex<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BigradedComplex")
            .field("operad", &self.spec.name())
            .field("flavor", &self.flavor)
            .field("cap", &self.cap)
            .field("blocks", &self.blocks.values().collect::<Vec<_>>())
            .finish()
    }
}

fn normalized_basis(spec: &OperadSpec, arity: usize, gens: &[usize]) -> Vec<OperadElement> {
    let full = || gens.iter().map(|&g| OperadElement::basis(arity, g)).collect();
    if arity == 0 || gens.is_empty() {
        return full();
    }
    // Rows: (codegeneracy index, target generator); columns: generators of the block.
    let mut rows: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut triplets = Vec::new();
    for (col, &g) in gens.iter().enumerate() {
        let x = OperadElement::basis(arity, g);
        for i in 0..arity {
            let s = codegeneracy(spec, i, &x).expect("index in range");
            for (t, c) in s.terms() {
                let n = rows.len();
                let row = *rows.entry((i, t)).or_insert(n);
                triplets.push((row, col, c.clone()));
            }
        }
    }
    let m = RatMatrix::from_triplets(rows.len(), gens.len(), triplets).expect("in range");
    let vectors: Vec<Vec<BigRational>> = match (spec.ring(), m.to_integer()) {
        (Ring::Integers, Some(int)) => integer_kernel_basis(&int)
            .into_iter()
            .map(|v| v.into_iter().map(BigRational::from_integer).collect())
            .collect(),
        _ => kernel_basis(&m),
    };
    vectors
        .into_iter()
        .map(|v| {
            OperadElement::from_terms(
                arity,
                v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (gens[i], c)),
            )
        })
        .collect()
}

/// Builds the complex in arities `0..=cap`.
pub fn build_complex(spec: &OperadSpec, cap: usize, flavor: Flavor) -> Result<BigradedComplex<'_>> {
    if cap > spec.arity_cap() {
        return Err(Error::Truncation { needed: cap, cap: spec.arity_cap() });
    }
    let mut blocks = BTreeMap::new();
    for k in 0..=cap {
        for g in spec.gradings(k) {
            let generators = spec.block(k, g);
            let (basis, solver) = match flavor {
                Flavor::Full => (generators.iter().map(|&i| OperadElement::basis(k, i)).collect(), None),
                Flavor::Normalized => {
                    let basis = normalized_basis(spec, k, &generators);
                    let triplets = basis.iter().enumerate().flat_map(|(col, b)| {
                        let gens = &generators;
                        b.terms().map(move |(i, c)| (gens.binary_search(&i).unwrap(), col, c.clone()))
                    });
                    let m = RatMatrix::from_triplets(generators.len(), basis.len(), triplets).expect("in range");
                    (basis, Some(ColumnSpace::new(&m)))
                }
            };
            blocks.insert((k, g), ChainBlock { arity: k, grading: g, generators, basis, solver });
        }
    }
    let mut complex = BigradedComplex { spec, flavor, cap, blocks, differentials: BTreeMap::new() };
    let keys: Vec<(usize, i64)> = complex.blocks.keys().copied().filter(|(k, _)| *k < cap).collect();
    for (k, g) in keys {
        let src = &complex.blocks[&(k, g)];
        let target_dim = complex.blocks.get(&(k + 1, g)).map_or(0, ChainBlock::dim);
        let mut triplets = Vec::new();
        for (col, b) in src.basis.iter().enumerate() {
            let d = hochschild_differential(spec, b)?;
            if d.is_zero() {
                continue;
            }
            let coords = complex.blocks.get(&(k + 1, g)).and_then(|t| t.coordinates(&d)).ok_or_else(|| {
                Error::NotNormalized {
                    index: degeneracy_witness(spec, &d).map_or(0, |w| w.0),
                    witness: spec.display(&d),
                }
            })?;
            for (row, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    triplets.push((row, col, c));
                }
            }
        }
        let m = RatMatrix::from_triplets(target_dim, src.dim(), triplets)?;
        complex.differentials.insert((k, g), m);
    }
    Ok(complex)
}

impl<'a> BigradedComplex<'a> {
    pub fn spec(&self) -> &'a OperadSpec {
        self.spec
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn block(&self, arity: usize, grading: i64) -> Option<&ChainBlock> {
        self.blocks.get(&(arity, grading))
    }

    pub fn blocks(&self) -> impl Iterator<Item = &ChainBlock> {
        self.blocks.values()
    }

    /// Dimension of the chain group in a bidegree (0 when absent).
    pub fn dim(&self, arity: usize, grading: i64) -> usize {
        self.block(arity, grading).map_or(0, ChainBlock::dim)
    }

    /// Matrix of `∂` out of `(arity, grading)`, when `arity + 1 <= cap`.
    ///
    /// Absent blocks give a matrix with zero rows or columns.
    pub fn differential(&self, arity: usize, grading: i64) -> Option<RatMatrix> {
        if arity + 1 > self.cap {
            return None;
        }
        Some(
            self.differentials
                .get(&(arity, grading))
                .cloned()
                .unwrap_or_else(|| RatMatrix::zeros(self.dim(arity + 1, grading), self.dim(arity, grading))),
        )
    }

    /// Like [`Self::differential`], over the integers, when the entries are integral.
    pub fn integer_differential(&self, arity: usize, grading: i64) -> Option<IntMatrix> {
        self.differential(arity, grading)?.to_integer()
    }

    /// All gradings with a block, ascending.
    pub fn gradings(&self) -> Vec<i64> {
        let mut g: Vec<i64> = self.blocks.keys().map(|&(_, g)| g).collect();
        g.sort_unstable();
        g.dedup();
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defs::{builtin_assoc, builtin_frobenius_end, FrobeniusSpec};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn assoc_cofaces_and_differential() {
        let spec = builtin_assoc(6).unwrap();
        let a = |k| OperadElement::basis(k, 0);
        for k in 0..5 {
            for i in 0..=k + 1 {
                assert_eq!(coface(&spec, i, &a(k)).unwrap(), a(k + 1));
            }
        }
        assert_eq!(hochschild_differential(&spec, &a(1)).unwrap(), a(2));
        assert!(hochschild_differential(&spec, &a(2)).unwrap().is_zero());
        assert!(hochschild_differential(&spec, &a(0)).unwrap().is_zero());
        assert_eq!(codegeneracy(&spec, 0, &a(2)).unwrap(), a(1));
        assert!(is_normalized(&spec, &a(0)));
        assert!(!is_normalized(&spec, &a(1)));
        assert!(matches!(coface(&spec, 4, &a(2)), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(hochschild_differential(&spec, &a(6)), Err(Error::Truncation { .. })));
    }

    #[test]
    fn assoc_complex_matrices() {
        let spec = builtin_assoc(6).unwrap();
        let full = build_complex(&spec, 6, Flavor::Full).unwrap();
        for k in 0..6 {
            let d = full.differential(k, 0).unwrap();
            assert_eq!(d.get(0, 0), q(if k % 2 == 1 { 1 } else { 0 }));
        }
        let norm = build_complex(&spec, 6, Flavor::Normalized).unwrap();
        assert_eq!(norm.dim(0, 0), 1);
        for k in 1..=6 {
            assert_eq!(norm.dim(k, 0), 0);
        }
    }

    #[test]
    fn frobenius_normalized_bases_are_normalized() {
        let spec = builtin_frobenius_end(&FrobeniusSpec::dual1(), 4).unwrap();
        let c = build_complex(&spec, 4, Flavor::Normalized).unwrap();
        for b in c.blocks() {
            for v in &b.basis {
                assert!(is_normalized(&spec, v));
                assert_eq!(b.coordinates(v).unwrap().iter().filter(|c| !c.is_zero()).count(), 1);
            }
        }
        assert!(!spec.identity().is_zero() && !is_normalized(&spec, spec.identity()));
    }
}
