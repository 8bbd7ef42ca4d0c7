use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::element::OperadElement;
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;

/// Coefficient ring an operad's data is declared over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Integers,
    Rationals,
}

impl Ring {
    pub fn tag(self) -> &'static str {
        match self {
            Ring::Integers => "integers",
            Ring::Rationals => "rationals",
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        match s.to_ascii_lowercase().as_str() {
            "z" | "int" | "integers" => Ok(Ring::Integers),
            "q" | "rat" | "rationals" => Ok(Ring::Rationals),
            other => Err(Error::InvalidInput(format!("unknown ring {other:?} (expected integers or rationals)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub arity: usize,
    /// Internal grading; the total degree is `grading - arity`.
    pub grading: i64,
}

/// Sparse linear combination of generator indices.
pub type Combination = Vec<(usize, BigRational)>;

/// Identifies the table entry for `x ∘_slot y` on basis generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComposeKey {
    pub x_arity: usize,
    pub x: usize,
    pub slot: usize,
    pub y_arity: usize,
    pub y: usize,
}

impl ComposeKey {
    pub fn out_arity(&self) -> usize {
        self.x_arity + self.y_arity - 1
    }
}

/// Dense per-(l, m) blocks of composition outputs; an empty combination means zero.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ComposeTable {
    ranks: Vec<usize>,
    blocks: Vec<Vec<Vec<Combination>>>,
}

impl ComposeTable {
    fn new(ranks: Vec<usize>) -> Self {
        let cap = ranks.len() - 1;
        let blocks = (0..=cap)
            .map(|l| {
                (0..=cap)
                    .map(|m| {
                        if l >= 1 && l + m - 1 <= cap {
                            vec![Vec::new(); ranks[l] * l * ranks[m]]
                        } else {
                            Vec::new()
                        }
                    })
                    .collect()
            })
            .collect();
        ComposeTable { ranks, blocks }
    }

    fn offset(&self, k: &ComposeKey) -> usize {
        (k.x * k.x_arity + (k.slot - 1)) * self.ranks[k.y_arity] + k.y
    }

    fn get(&self, k: &ComposeKey) -> &[(usize, BigRational)] {
        &self.blocks[k.x_arity][k.y_arity][self.offset(k)]
    }

    fn set(&mut self, k: &ComposeKey, c: Combination) {
        let off = self.offset(k);
        self.blocks[k.x_arity][k.y_arity][off] = c;
    }
}

/// Finite presentation of a graded (cyclic) multiplicative operad up to an arity cap.
///
/// Component `O(k)` has a basis of named generators sorted by name; every
/// element, matrix and table uses that order.
#[derive(Clone, Debug)]
pub struct OperadSpec {
    name: String,
    ring: Ring,
    components: Vec<Vec<Generator>>,
    index: Vec<HashMap<String, usize>>,
    table: ComposeTable,
    identity: OperadElement,
    unit: OperadElement,
    multiplication: OperadElement,
    /// `tau[k][c]` is the image of generator `c` of arity `k`.
    tau: Option<Vec<Vec<OperadElement>>>,
    sparse: bool,
    metadata: BTreeMap<String, String>,
    tau_powers: Vec<OnceLock<Vec<Vec<OperadElement>>>>,
}

impl PartialEq for OperadSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.ring == other.ring
            && self.components == other.components
            && self.table == other.table
            && self.identity == other.identity
            && self.unit == other.unit
            && self.multiplication == other.multiplication
            && self.tau == other.tau
            && self.sparse == other.sparse
            && self.metadata == other.metadata
    }
}

impl OperadSpec {
    /// Creates a spec with the given generators (`components[k]` lists
    /// `(name, grading)` for arity `k`), an all-zero composition table and
    /// zero distinguished elements.
    pub fn new(name: impl Into<String>, ring: Ring, components: Vec<Vec<(String, i64)>>) -> Result<Self> {
        if components.len() < 3 {
            return Err(Error::semantic("arities", "data up to at least arity 2 is required"));
        }
        let mut comps = Vec::with_capacity(components.len());
        let mut index = Vec::with_capacity(components.len());
        for (arity, gens) in components.into_iter().enumerate() {
            let mut gens: Vec<Generator> =
                gens.into_iter().map(|(name, grading)| Generator { name, arity, grading }).collect();
            gens.sort_by(|a, b| a.name.cmp(&b.name));
            let mut map = HashMap::with_capacity(gens.len());
            for (i, g) in gens.iter().enumerate() {
                if map.insert(g.name.clone(), i).is_some() {
                    return Err(Error::semantic(
                        format!("arity {arity}"),
                        format!("duplicate generator name {:?}", g.name),
                    ));
                }
            }
            comps.push(gens);
            index.push(map);
        }
        let ranks: Vec<usize> = comps.iter().map(Vec::len).collect();
        let cap = ranks.len() - 1;
        Ok(OperadSpec {
            name: name.into(),
            ring,
            table: ComposeTable::new(ranks),
            components: comps,
            index,
            identity: OperadElement::zero(1),
            unit: OperadElement::zero(0),
            multiplication: OperadElement::zero(2),
            tau: None,
            sparse: false,
            metadata: BTreeMap::new(),
            tau_powers: (0..=cap).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn arity_cap(&self) -> usize {
        self.components.len() - 1
    }

    pub fn rank(&self, arity: usize) -> usize {
        self.components.get(arity).map_or(0, Vec::len)
    }

    pub fn generators(&self, arity: usize) -> &[Generator] {
        self.components.get(arity).map_or(&[], Vec::as_slice)
    }

    pub fn generator(&self, arity: usize, index: usize) -> &Generator {
        &self.components[arity][index]
    }

    pub fn grading(&self, arity: usize, index: usize) -> i64 {
        self.components[arity][index].grading
    }

    pub fn index_of(&self, arity: usize, name: &str) -> Option<usize> {
        self.index.get(arity)?.get(name).copied()
    }

    /// Distinct internal gradings occurring in `O(arity)`, ascending.
    pub fn gradings(&self, arity: usize) -> Vec<i64> {
        let mut g: Vec<i64> = self.generators(arity).iter().map(|g| g.grading).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// Generator indices of `O(arity)` in the given internal grading.
    pub fn block(&self, arity: usize, grading: i64) -> Vec<usize> {
        self.generators(arity).iter().enumerate().filter(|(_, g)| g.grading == grading).map(|(i, _)| i).collect()
    }

    pub fn sparse(&self) -> bool {
        self.sparse
    }

    pub fn set_sparse(&mut self, sparse: bool) {
        self.sparse = sparse;
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn set_metadata(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.insert(key.into(), value.into());
    }

    pub fn identity(&self) -> &OperadElement {
        &self.identity
    }

    pub fn unit(&self) -> &OperadElement {
        &self.unit
    }

    pub fn multiplication(&self) -> &OperadElement {
        &self.multiplication
    }

    fn check_element(&self, el: &OperadElement, arity: usize, what: &str) -> Result<()> {
        if !el.is_zero() && el.arity() != arity {
            return Err(Error::semantic(what, format!("expected arity {arity}, got {}", el.arity())));
        }
        if let Some((i, _)) = el.terms().find(|(i, _)| *i >= self.rank(arity)) {
            return Err(Error::semantic(what, format!("generator index {i} out of range at arity {arity}")));
        }
        Ok(())
    }

    pub fn set_identity(&mut self, el: OperadElement) -> Result<()> {
        self.check_element(&el, 1, "id")?;
        self.identity = el;
        Ok(())
    }

    pub fn set_unit(&mut self, el: OperadElement) -> Result<()> {
        self.check_element(&el, 0, "e")?;
        self.unit = el;
        Ok(())
    }

    pub fn set_multiplication(&mut self, el: OperadElement) -> Result<()> {
        self.check_element(&el, 2, "mu")?;
        self.multiplication = el;
        Ok(())
    }

    fn check_key(&self, k: &ComposeKey) -> Result<()> {
        let cap = self.arity_cap();
        if k.x_arity == 0 || k.slot == 0 || k.slot > k.x_arity {
            return Err(Error::SlotOutOfRange { slot: k.slot, arity: k.x_arity });
        }
        if k.x_arity > cap || k.y_arity > cap || k.out_arity() > cap {
            return Err(Error::Truncation { needed: k.out_arity().max(k.x_arity).max(k.y_arity), cap });
        }
        if k.x >= self.rank(k.x_arity) || k.y >= self.rank(k.y_arity) {
            return Err(Error::IndexOutOfRange {
                index: k.x.max(k.y),
                min: 0,
                max: self.rank(k.x_arity).max(self.rank(k.y_arity)).saturating_sub(1),
            });
        }
        Ok(())
    }

    /// Sets the table entry for `x ∘_slot y`; zero coefficients are dropped.
    pub fn set_composition(&mut self, key: ComposeKey, value: Combination) -> Result<()> {
        self.check_key(&key)?;
        let out_rank = self.rank(key.out_arity());
        let mut merged: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (o, c) in value {
            if o >= out_rank {
                return Err(Error::IndexOutOfRange { index: o, min: 0, max: out_rank.saturating_sub(1) });
            }
            *merged.entry(o).or_insert_with(BigRational::zero) += c;
        }
        self.table.set(&key, merged.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        Ok(())
    }

    /// The table entry for `x ∘_slot y` (empty when zero).
    pub fn composition(&self, key: &ComposeKey) -> Result<&[(usize, BigRational)]> {
        self.check_key(key)?;
        Ok(self.table.get(key))
    }

    /// All nonzero table entries in key order.
    pub fn compositions(&self) -> Vec<(ComposeKey, &[(usize, BigRational)])> {
        let mut out = Vec::new();
        for key in self.compose_keys() {
            let v = self.table.get(&key);
            if !v.is_empty() {
                out.push((key, v));
            }
        }
        out
    }

    /// Every key within the arity cap, in order.
    pub fn compose_keys(&self) -> impl Iterator<Item = ComposeKey> + '_ {
        let cap = self.arity_cap();
        (1..=cap).flat_map(move |l| {
            (0..=cap + 1 - l).flat_map(move |m| {
                (0..self.rank(l)).flat_map(move |x| {
                    (1..=l).flat_map(move |slot| {
                        (0..self.rank(m)).map(move |y| ComposeKey { x_arity: l, x, slot, y_arity: m, y })
                    })
                })
            })
        })
    }

    pub fn has_tau(&self) -> bool {
        self.tau.is_some()
    }

    /// Installs (or removes) the cyclic structure: one square matrix per arity
    /// `0..=cap`, column `c` holding the image of generator `c`.
    pub fn set_tau(&mut self, tau: Option<Vec<RatMatrix>>) -> Result<()> {
        self.tau_powers = (0..=self.arity_cap()).map(|_| OnceLock::new()).collect();
        let Some(mats) = tau else {
            self.tau = None;
            return Ok(());
        };
        if mats.len() != self.arity_cap() + 1 {
            return Err(Error::semantic(
                "tau",
                format!("expected matrices for arities 0..={}, got {}", self.arity_cap(), mats.len()),
            ));
        }
        let mut images = Vec::with_capacity(mats.len());
        for (k, m) in mats.iter().enumerate() {
            let n = self.rank(k);
            if m.rows() != n || m.cols() != n {
                return Err(Error::semantic(
                    format!("tau at arity {k}"),
                    format!("expected a {n}x{n} matrix, got {}x{}", m.rows(), m.cols()),
                ));
            }
            let cols = m.columns();
            images.push(cols.into_iter().map(|col| OperadElement::from_terms(k, col)).collect());
        }
        self.tau = Some(images);
        Ok(())
    }

    pub fn tau_matrix(&self, arity: usize) -> Option<RatMatrix> {
        let images = self.tau.as_ref()?.get(arity)?;
        let n = self.rank(arity);
        let triplets = images.iter().enumerate().flat_map(|(c, im)| im.terms().map(move |(r, v)| (r, c, v.clone())));
        Some(RatMatrix::from_triplets(n, n, triplets).expect("tau images are in range"))
    }

    pub fn tau_matrices(&self) -> Option<Vec<RatMatrix>> {
        (0..=self.arity_cap()).map(|k| self.tau_matrix(k)).collect()
    }

    // ---- evaluation ----

    /// Partial composition `x ∘_slot y`, extended bilinearly from the table.
    pub fn compose(&self, x: &OperadElement, slot: usize, y: &OperadElement) -> Result<OperadElement> {
        let (l, m) = (x.arity(), y.arity());
        if x.is_zero() || y.is_zero() {
            return Ok(OperadElement::zero((l + m).saturating_sub(1)));
        }
        if slot == 0 || slot > l {
            return Err(Error::SlotOutOfRange { slot, arity: l });
        }
        let out_arity = l + m - 1;
        if out_arity > self.arity_cap() {
            return Err(Error::Truncation { needed: out_arity, cap: self.arity_cap() });
        }
        let mut out = OperadElement::zero(out_arity);
        for (xi, xc) in x.terms() {
            for (yi, yc) in y.terms() {
                let entry = self.table.get(&ComposeKey { x_arity: l, x: xi, slot, y_arity: m, y: yi });
                if entry.is_empty() {
                    continue;
                }
                let prod = xc * yc;
                for (o, c) in entry {
                    out.add_term(*o, &(c * &prod));
                }
            }
        }
        Ok(out)
    }

    /// Unsigned `μ(x, y) = (μ ∘_1 x) ∘_{l+1} y`.
    pub fn mu_apply(&self, x: &OperadElement, y: &OperadElement) -> Result<OperadElement> {
        let (l, m) = (x.arity(), y.arity());
        if x.is_zero() || y.is_zero() {
            return Ok(OperadElement::zero(l + m));
        }
        if l + m > self.arity_cap() {
            return Err(Error::Truncation { needed: l + m, cap: self.arity_cap() });
        }
        if l < self.arity_cap() {
            let left = self.compose(&self.multiplication, 1, x)?;
            return self.compose(&left, l + 1, y);
        }
        // μ ∘_1 x would leave the table; use (μ ∘_1 x) ∘_{l+1} y = (-1)^{x̃ỹ} (μ ∘_2 y) ∘_1 x.
        let mut out = OperadElement::zero(l + m);
        for (b, yb) in self.homogeneous_parts(y) {
            let right = self.compose(&self.multiplication, 2, &yb)?;
            for (a, xa) in self.homogeneous_parts(x) {
                out += &self.compose(&right, 1, &xa)?.signed(a * b);
            }
        }
        Ok(out)
    }

    fn tau_images(&self) -> Result<&Vec<Vec<OperadElement>>> {
        self.tau.as_ref().ok_or(Error::TauAbsent)
    }

    fn apply_columns(images: &[OperadElement], x: &OperadElement) -> OperadElement {
        let mut out = OperadElement::zero(x.arity());
        for (i, c) in x.terms() {
            out.add_scaled(&images[i], c);
        }
        out
    }

    pub fn tau(&self, x: &OperadElement) -> Result<OperadElement> {
        self.tau_pow(x, 1)
    }

    /// `τ_k^p(x)` for any integer `p`; the exponent is reduced mod `k + 1`.
    pub fn tau_pow(&self, x: &OperadElement, p: i64) -> Result<OperadElement> {
        let images = self.tau_images()?;
        let k = x.arity();
        if x.is_zero() {
            return Ok(OperadElement::zero(k));
        }
        if k > self.arity_cap() {
            return Err(Error::Truncation { needed: k, cap: self.arity_cap() });
        }
        let e = p.rem_euclid(k as i64 + 1) as usize;
        if e == 0 {
            return Ok(x.clone());
        }
        let powers = self.tau_powers[k].get_or_init(|| {
            let base = &images[k];
            let mut powers = vec![(0..self.rank(k)).map(|c| OperadElement::basis(k, c)).collect::<Vec<_>>()];
            for _ in 1..=k {
                let prev = powers.last().unwrap();
                powers.push(prev.iter().map(|col| Self::apply_columns(base, col)).collect());
            }
            powers
        });
        Ok(Self::apply_columns(&powers[e], x))
    }

    // ---- gradings and display ----

    /// Internal grading of a nonzero homogeneous element.
    pub fn grading_of(&self, x: &OperadElement) -> Option<i64> {
        let mut gs = x.terms().map(|(i, _)| self.grading(x.arity(), i));
        let first = gs.next()?;
        gs.all(|g| g == first).then_some(first)
    }

    /// Splits an element into homogeneous components, ascending by grading.
    pub fn homogeneous_parts(&self, x: &OperadElement) -> Vec<(i64, OperadElement)> {
        let mut parts: BTreeMap<i64, OperadElement> = BTreeMap::new();
        for (i, c) in x.terms() {
            parts.entry(self.grading(x.arity(), i)).or_insert_with(|| OperadElement::zero(x.arity())).add_term(i, c);
        }
        parts.into_iter().collect()
    }

    /// Looks up a generator by name, optionally qualified as `name@arity`.
    pub fn element_by_name(&self, name: &str) -> Result<OperadElement> {
        if let Some((base, ar)) = name.rsplit_once('@') {
            let arity: usize =
                ar.parse().map_err(|_| Error::InvalidInput(format!("bad arity qualifier in {name:?}")))?;
            return self
                .index_of(arity, base)
                .map(|i| OperadElement::basis(arity, i))
                .ok_or_else(|| Error::InvalidInput(format!("no generator {base:?} in arity {arity}")));
        }
        let hits: Vec<(usize, usize)> =
            self.index.iter().enumerate().filter_map(|(k, m)| m.get(name).map(|&i| (k, i))).collect();
        match hits.as_slice() {
            [(k, i)] => Ok(OperadElement::basis(*k, *i)),
            [] => Err(Error::InvalidInput(format!("unknown generator {name:?}"))),
            _ => {
                Err(Error::InvalidInput(format!("generator name {name:?} is ambiguous; qualify it as {name}@<arity>")))
            }
        }
    }

    /// Renders an element as a linear combination of generator names.
    pub fn display(&self, x: &OperadElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (i, c)) in x.terms().enumerate() {
            let name = &self.generator(x.arity(), i).name;
            let negative = c.is_negative();
            let abs = c.abs();
            match (n, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if abs.is_one() {
                out.push_str(name);
            } else {
                let _ = write!(out, "{abs}*{name}");
            }
        }
        out
    }
}
