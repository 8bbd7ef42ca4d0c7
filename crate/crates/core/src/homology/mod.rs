//! Bigraded Hochschild homology with torsion, cycle representatives, and the
//! operations induced on homology.

mod verify;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bv::{bracket, bullet, connes_b};
use crate::error::{Error, Result};
use crate::hochschild::{build_complex, hochschild_differential, BigradedComplex, ChainBlock, Flavor};
use crate::linalg::{integer_kernel_basis, primitive, snf, ColumnSpace, SparseVec};
use crate::operad::{OperadElement, OperadSpec, Ring};

pub use verify::{verify_bv_on_homology, verify_bv_on_homology_with, DEFAULT_PROBES};

/// Homology in one bidegree `(arity, grading)`.
#[derive(Clone)]
pub struct HomologyEntry {
    pub arity: usize,
    pub grading: i64,
    /// Dimension of the chain group.
    pub chains: usize,
    /// Dimension of the cycles `ker ∂`.
    pub cycles: usize,
    /// Rank of the incoming differential `∂: (arity - 1, grading) -> (arity, grading)`.
    pub boundaries: usize,
    /// Free rank (the rational Betti number).
    pub betti: usize,
    /// Invariant factors greater than 1 of the incoming differential; empty over the rationals.
    pub torsion: Vec<BigInt>,
    /// Integral cycles whose classes form a basis of the rational homology.
    pub representatives: Vec<OperadElement>,
    /// Columns: boundaries (images of source basis vectors), then representatives.
    space: ColumnSpace,
    /// Number of boundary columns in `space`.
    image_columns: usize,
}

impl fmt::Debug for HomologyEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HomologyEntry")
            .field("arity", &self.arity)
            .field("grading", &self.grading)
            .field("betti", &self.betti)
            .field("torsion", &self.torsion)
            .finish()
    }
}

impl HomologyEntry {
    /// Total degree `grading - arity`.
    pub fn degree(&self) -> i64 {
        self.grading - self.arity as i64
    }
}

/// A homology class, as coordinates in the representative basis of its bidegree.
#[derive(Clone, Debug)]
pub struct HomologyClass {
    pub arity: usize,
    pub grading: i64,
    pub coordinates: Vec<BigRational>,
}

impl PartialEq for HomologyClass {
    /// Zero classes are equal whatever their bidegree.
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.arity == other.arity && self.grading == other.grading && self.coordinates == other.coordinates
    }
}

impl HomologyClass {
    pub fn zero(arity: usize, grading: i64, betti: usize) -> Self {
        HomologyClass { arity, grading, coordinates: vec![BigRational::zero(); betti] }
    }

    /// Total degree `grading - arity`.
    pub fn degree(&self) -> i64 {
        self.grading - self.arity as i64
    }

    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }

    /// Multiplies by `(-1)^exponent`.
    pub fn signed(mut self, exponent: i64) -> Self {
        if exponent.rem_euclid(2) == 1 {
            for c in &mut self.coordinates {
                *c = -c.clone();
            }
        }
        self
    }

    /// Sum of two classes; a zero summand adopts the other's bidegree.
    pub fn add(&self, other: &HomologyClass) -> Result<HomologyClass> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if (self.arity, self.grading) != (other.arity, other.grading) {
            return Err(Error::DimensionMismatch(format!(
                "adding classes of bidegree ({}, {}) and ({}, {})",
                self.arity, self.grading, other.arity, other.grading
            )));
        }
        let coordinates = self.coordinates.iter().zip(&other.coordinates).map(|(a, b)| a + b).collect();
        Ok(HomologyClass { arity: self.arity, grading: self.grading, coordinates })
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let coords: Vec<String> = self.coordinates.iter().map(ToString::to_string).collect();
        write!(f, "[{}] in ({}, {})", coords.join(", "), self.arity, self.grading)
    }
}

/// An operation induced on homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomologyOp {
    Bullet,
    Bracket,
    ConnesB,
}

impl HomologyOp {
    pub fn operands(self) -> usize {
        match self {
            HomologyOp::ConnesB => 1,
            _ => 2,
        }
    }

    /// Bidegree of the result for operands of the given bidegrees.
    fn target(self, operands: &[(usize, i64)]) -> Option<(usize, i64)> {
        match (self, operands) {
            (HomologyOp::Bullet, [(l, a), (m, b)]) => Some((l + m, a + b)),
            (HomologyOp::Bracket, [(l, a), (m, b)]) => Some(((l + m).checked_sub(1)?, a + b)),
            (HomologyOp::ConnesB, [(k, g)]) => Some((k.checked_sub(1)?, *g)),
            _ => None,
        }
    }

    /// Applies the chain-level operation.
    pub fn apply(self, spec: &OperadSpec, operands: &[OperadElement]) -> Result<OperadElement> {
        match (self, operands) {
            (HomologyOp::Bullet, [x, y]) => bullet(spec, x, y),
            (HomologyOp::Bracket, [x, y]) => bracket(spec, x, y),
            (HomologyOp::ConnesB, [x]) => connes_b(spec, x),
            _ => Err(Error::InvalidInput(format!("{self:?} takes {} operands", self.operands()))),
        }
    }
}

/// Hochschild homology in every bidegree of arity at most `cap - 1`.
pub struct HomologyTable<'a> {
    complex: BigradedComplex<'a>,
    coefficients: Ring,
    entries: BTreeMap<(usize, i64), HomologyEntry>,
}

impl fmt::Debug for HomologyTable<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HomologyTable")
            .field("operad", &self.spec().name())
            .field("flavor", &self.flavor())
            .field("cap", &self.cap())
            .field("coefficients", &self.coefficients)
            .field("entries", &self.entries.values().collect::<Vec<_>>())
            .finish()
    }
}

fn sparse(v: &[BigRational]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// Computes `HH` from the complex truncated at arity `cap`.
///
/// Over the integers the chain bases must be integral (true for normalized
/// chains of an operad over the integers and for full chains); torsion is
/// read from the Smith normal form of the incoming differential.
pub fn compute_hh(spec: &OperadSpec, cap: usize, flavor: Flavor, coefficients: Ring) -> Result<HomologyTable<'_>> {
    if cap == 0 {
        return Err(Error::Truncation { needed: 1, cap: 0 });
    }
    let complex = build_complex(spec, cap, flavor)?;
    let mut entries = BTreeMap::new();
    for block in complex.blocks() {
        if block.arity + 1 > cap {
            continue;
        }
        let entry = homology_entry(&complex, block, coefficients)?;
        entries.insert((block.arity, block.grading), entry);
    }
    Ok(HomologyTable { complex, coefficients, entries })
}

fn homology_entry(complex: &BigradedComplex<'_>, block: &ChainBlock, coefficients: Ring) -> Result<HomologyEntry> {
    let (k, g) = (block.arity, block.grading);
    let out = complex.differential(k, g).expect("k + 1 <= cap");
    let incoming = if k == 0 { None } else { complex.differential(k - 1, g) };

    let mut space = ColumnSpace::new(&crate::linalg::RatMatrix::zeros(block.dim(), 0));
    let mut image_columns = 0;
    let mut torsion = Vec::new();
    if let Some(inc) = &incoming {
        for col in inc.columns() {
            space.push_column(col.into_iter().collect());
            image_columns += 1;
        }
        if coefficients == Ring::Integers {
            let int = inc.to_integer().ok_or_else(|| {
                Error::InvalidInput(format!("differential into ({k}, {g}) is not integral; use rational coefficients"))
            })?;
            torsion = snf(&int).invariant_factors().into_iter().filter(|d| !d.is_one()).collect();
        }
    }
    let boundaries = space.rank();

    let candidates: Vec<Vec<BigRational>> = match coefficients {
        Ring::Integers => {
            let int = out.to_integer().ok_or_else(|| {
                Error::InvalidInput(format!(
                    "differential out of ({k}, {g}) is not integral; use rational coefficients"
                ))
            })?;
            integer_kernel_basis(&int)
                .into_iter()
                .map(|v| v.into_iter().map(BigRational::from_integer).collect())
                .collect()
        }
        Ring::Rationals => {
            ColumnSpace::new(&out).kernel().iter().map(|v| primitive(&crate::linalg::densify(v, block.dim()))).collect()
        }
    };
    let cycles = candidates.len();
    let mut reps = Vec::new();
    for c in candidates {
        if space.push_column(sparse(&c)) {
            reps.push(c);
        }
    }
    // Rebuild with only boundaries and the chosen representatives as columns.
    let mut clean = ColumnSpace::new(&crate::linalg::RatMatrix::zeros(block.dim(), 0));
    if let Some(inc) = &incoming {
        for col in inc.columns() {
            clean.push_column(col.into_iter().collect());
        }
    }
    for r in &reps {
        clean.push_column(sparse(r));
    }
    Ok(HomologyEntry {
        arity: k,
        grading: g,
        chains: block.dim(),
        cycles,
        boundaries,
        betti: reps.len(),
        torsion,
        representatives: reps.iter().map(|r| block.element(r)).collect(),
        space: clean,
        image_columns,
    })
}

impl<'a> HomologyTable<'a> {
    pub fn spec(&self) -> &'a OperadSpec {
        self.complex.spec()
    }

    pub fn complex(&self) -> &BigradedComplex<'a> {
        &self.complex
    }

    pub fn flavor(&self) -> Flavor {
        self.complex.flavor()
    }

    /// Arity bound of the chain complex; entries exist up to arity `cap - 1`.
    pub fn cap(&self) -> usize {
        self.complex.cap()
    }

    pub fn coefficients(&self) -> Ring {
        self.coefficients
    }

    pub fn entry(&self, arity: usize, grading: i64) -> Option<&HomologyEntry> {
        self.entries.get(&(arity, grading))
    }

    pub fn entries(&self) -> impl Iterator<Item = &HomologyEntry> {
        self.entries.values()
    }

    pub fn betti(&self, arity: usize, grading: i64) -> usize {
        self.entry(arity, grading).map_or(0, |e| e.betti)
    }

    /// Entries with nonzero free rank or torsion.
    pub fn nonzero(&self) -> impl Iterator<Item = &HomologyEntry> {
        self.entries.values().filter(|e| e.betti > 0 || !e.torsion.is_empty())
    }

    /// The basis class `e_index` of a bidegree.
    pub fn basis_class(&self, arity: usize, grading: i64, index: usize) -> HomologyClass {
        let mut c = HomologyClass::zero(arity, grading, self.betti(arity, grading));
        c.coordinates[index] = BigRational::one();
        c
    }

    /// Every basis class, ordered by bidegree.
    pub fn basis_classes(&self) -> Vec<HomologyClass> {
        self.entries.values().flat_map(|e| (0..e.betti).map(move |i| self.basis_class(e.arity, e.grading, i))).collect()
    }

    /// The cycle `Σ c_i r_i` representing a class.
    pub fn representative(&self, class: &HomologyClass) -> OperadElement {
        let mut out = OperadElement::zero(class.arity);
        if let Some(e) = self.entry(class.arity, class.grading) {
            for (c, r) in class.coordinates.iter().zip(&e.representatives) {
                out.add_scaled(r, c);
            }
        }
        out
    }

    /// Splits a cycle in bidegree `(arity, grading)` as `Σ c_i r_i + ∂w`.
    ///
    /// Returns `None` when the bidegree is outside the table. Errors when
    /// the input is not in the chain group or is not a cycle.
    pub fn decompose(
        &self,
        arity: usize,
        grading: i64,
        cycle: &OperadElement,
    ) -> Result<Option<(HomologyClass, OperadElement)>> {
        let spec = self.spec();
        if arity + 1 > self.cap() {
            return Ok(None);
        }
        if cycle.is_zero() {
            let betti = self.betti(arity, grading);
            return Ok(Some((
                HomologyClass::zero(arity, grading, betti),
                OperadElement::zero(arity.saturating_sub(1)),
            )));
        }
        if cycle.arity() != arity || spec.grading_of(cycle) != Some(grading) {
            return Err(Error::InvalidInput(format!(
                "{} does not lie in bidegree ({arity}, {grading})",
                spec.display(cycle)
            )));
        }
        let (Some(block), Some(entry)) = (self.complex.block(arity, grading), self.entry(arity, grading)) else {
            return Ok(None);
        };
        let boundary = hochschild_differential(spec, cycle)?;
        if !boundary.is_zero() {
            return Err(Error::NotACycle { witness: spec.display(&boundary) });
        }
        let coords = block.coordinates(cycle).ok_or_else(|| {
            let (index, w) = crate::hochschild::degeneracy_witness(spec, cycle).unwrap_or((0, cycle.clone()));
            Error::NotNormalized { index, witness: spec.display(&w) }
        })?;
        let solution = entry.space.solve(&coords)?.expect("cycles lie in the span of boundaries and representatives");
        let class = HomologyClass { arity, grading, coordinates: solution[entry.image_columns..].to_vec() };
        let mut witness = OperadElement::zero(arity.saturating_sub(1));
        if let Some(src) = arity.checked_sub(1).and_then(|s| self.complex.block(s, grading)) {
            witness = src.element(&solution[..entry.image_columns]);
        }
        Ok(Some((class, witness)))
    }

    /// The class of a cycle in an explicit bidegree; `None` outside the table.
    pub fn class_in(&self, arity: usize, grading: i64, cycle: &OperadElement) -> Result<Option<HomologyClass>> {
        Ok(self.decompose(arity, grading, cycle)?.map(|(c, _)| c))
    }

    /// The class of a nonzero homogeneous cycle; `None` outside the table.
    pub fn class_of(&self, cycle: &OperadElement) -> Result<Option<HomologyClass>> {
        let grading = self.spec().grading_of(cycle).ok_or_else(|| {
            Error::InvalidInput("class_of needs a nonzero homogeneous cycle; use class_in for zero".into())
        })?;
        self.class_in(cycle.arity(), grading, cycle)
    }

    /// Applies `op` to the representatives and takes the class of the result.
    pub fn induced_op(&self, op: HomologyOp, classes: &[HomologyClass]) -> Result<HomologyClass> {
        if classes.len() != op.operands() {
            return Err(Error::InvalidInput(format!("{op:?} takes {} operands", op.operands())));
        }
        let reps: Vec<OperadElement> = classes.iter().map(|c| self.representative(c)).collect();
        self.class_of_result(op, classes, &reps)
    }

    /// Applies `op` to given cycles representing `classes`.
    pub(crate) fn class_of_result(
        &self,
        op: HomologyOp,
        classes: &[HomologyClass],
        reps: &[OperadElement],
    ) -> Result<HomologyClass> {
        let bidegrees: Vec<(usize, i64)> = classes.iter().map(|c| (c.arity, c.grading)).collect();
        let Some((k, g)) = op.target(&bidegrees) else {
            // B of an arity-0 class, or a bracket of two arity-0 classes.
            return Ok(HomologyClass::zero(0, bidegrees.first().map_or(0, |b| b.1), 0));
        };
        if k + 1 > self.cap() {
            return Err(Error::Truncation { needed: k + 1, cap: self.cap() });
        }
        let value = op.apply(self.spec(), reps)?;
        Ok(self.class_in(k, g, &value)?.unwrap_or_else(|| HomologyClass::zero(k, g, 0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defs::{builtin_assoc, builtin_frobenius_end, FrobeniusSpec};

    #[test]
    fn assoc_has_one_class() {
        let spec = builtin_assoc(8).unwrap();
        for flavor in [Flavor::Full, Flavor::Normalized] {
            let table = compute_hh(&spec, 8, flavor, Ring::Integers).unwrap();
            let nonzero: Vec<(usize, i64, usize)> = table.nonzero().map(|e| (e.arity, e.grading, e.betti)).collect();
            assert_eq!(nonzero, vec![(0, 0, 1)]);
            assert!(table.entries().all(|e| e.torsion.is_empty()));
        }
    }

    #[test]
    fn class_of_boundary_and_representative() {
        let spec = builtin_frobenius_end(&FrobeniusSpec::dual1(), 4).unwrap();
        let table = compute_hh(&spec, 4, Flavor::Full, Ring::Rationals).unwrap();
        for e in table.nonzero() {
            for (i, r) in e.representatives.iter().enumerate() {
                let c = table.class_of(r).unwrap().unwrap();
                assert_eq!(c, table.basis_class(e.arity, e.grading, i));
            }
        }
        let x = OperadElement::basis(1, 0);
        let d = hochschild_differential(&spec, &x).unwrap();
        if !d.is_zero() {
            assert!(table.class_of(&d).unwrap().unwrap().is_zero());
        }
        assert!(matches!(table.class_of(&OperadElement::basis(2, 0)), Err(Error::NotACycle { .. }) | Ok(_)));
    }
}
