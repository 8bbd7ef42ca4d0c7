use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{determinant, IntMatrix, RatMatrix};
use crate::operad::{ComposeKey, OperadElement, OperadSpec, Ring};

/// Component ranks above this are refused unless `OPHH_MAX_RANK` says otherwise.
pub const DEFAULT_MAX_RANK: usize = 4096;

/// Reads `OPHH_MAX_RANK`, falling back to [`DEFAULT_MAX_RANK`].
pub fn max_rank_from_env() -> usize {
    std::env::var("OPHH_MAX_RANK").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_RANK)
}

/// A finite-rank graded Frobenius algebra on a basis with one-character labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusSpec {
    pub name: String,
    pub labels: Vec<char>,
    pub gradings: Vec<i64>,
    /// Basis index of the unit.
    pub unit: usize,
    /// `product[a][b]` is `e_a e_b` as `(basis index, coefficient)` pairs.
    pub product: Vec<Vec<Vec<(usize, i64)>>>,
    /// `pairing[a][b] = <e_a, e_b>`.
    pub pairing: Vec<Vec<i64>>,
}

fn parity(e: i64) -> i64 {
    if e.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

impl FrobeniusSpec {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// The ground ring as a rank-one algebra.
    pub fn ground() -> Self {
        FrobeniusSpec {
            name: "ground".into(),
            labels: vec!['1'],
            gradings: vec![0],
            unit: 0,
            product: vec![vec![vec![(0, 1)]]],
            pairing: vec![vec![1]],
        }
    }

    /// Dual numbers `k[e]/e^2` with `deg e = 1` and `<1, e> = 1`.
    pub fn dual1() -> Self {
        FrobeniusSpec {
            name: "dual1".into(),
            labels: vec!['1', 'e'],
            gradings: vec![0, 1],
            unit: 0,
            product: vec![vec![vec![(0, 1)], vec![(1, 1)]], vec![vec![(1, 1)], vec![]]],
            pairing: vec![vec![0, 1], vec![1, 0]],
        }
    }

    /// Exterior algebra on two generators `a`, `b` of degree 1, with `w = ab`
    /// and the pairing `<u, v>` = coefficient of `w` in `uv`.
    pub fn ext2() -> Self {
        let monomials: [&[u8]; 4] = [&[], &[1], &[2], &[1, 2]];
        let index = |m: &[u8]| monomials.iter().position(|x| *x == m).unwrap();
        let mut product = vec![vec![Vec::new(); 4]; 4];
        for (a, ma) in monomials.iter().enumerate() {
            for (b, mb) in monomials.iter().enumerate() {
                if ma.iter().any(|g| mb.contains(g)) {
                    continue;
                }
                let word: Vec<u8> = ma.iter().chain(mb.iter()).copied().collect();
                let inversions = (0..word.len())
                    .flat_map(|i| (i + 1..word.len()).map(move |j| (i, j)))
                    .filter(|&(i, j)| word[i] > word[j])
                    .count() as i64;
                let mut sorted = word.clone();
                sorted.sort_unstable();
                product[a][b] = vec![(index(&sorted), parity(inversions))];
            }
        }
        let pairing = (0..4)
            .map(|a| (0..4).map(|b| product[a][b].iter().find(|(c, _)| *c == 3).map_or(0, |(_, v)| *v)).collect())
            .collect();
        FrobeniusSpec {
            name: "ext2".into(),
            labels: vec!['1', 'a', 'b', 'w'],
            gradings: vec![0, 1, 1, 2],
            unit: 0,
            product,
            pairing,
        }
    }

    /// Truncated polynomial algebra `k[x]/x^3` with `deg x = 2`; `y = x^2`.
    pub fn cp2() -> Self {
        let product =
            (0..3).map(|a| (0..3).map(|b| if a + b < 3 { vec![(a + b, 1)] } else { vec![] }).collect()).collect();
        let pairing = (0..3).map(|a| (0..3).map(|b| i64::from(a + b == 2)).collect()).collect();
        FrobeniusSpec {
            name: "cp2".into(),
            labels: vec!['1', 'x', 'y'],
            gradings: vec![0, 2, 4],
            unit: 0,
            product,
            pairing,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "ground" => Some(Self::ground()),
            "dual1" => Some(Self::dual1()),
            "ext2" => Some(Self::ext2()),
            "cp2" => Some(Self::cp2()),
            _ => None,
        }
    }

    fn mul(&self, a: usize, b: usize) -> BTreeMap<usize, i64> {
        self.product[a][b].iter().copied().filter(|(_, v)| *v != 0).collect()
    }

    fn mul_vec(&self, x: &BTreeMap<usize, i64>, b: usize, left: bool) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for (&a, &c) in x {
            let prod = if left { self.mul(b, a) } else { self.mul(a, b) };
            for (k, v) in prod {
                *out.entry(k).or_insert(0) += c * v;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Checks the Frobenius axioms: shape, grading, unit, associativity,
    /// graded symmetry, invariance, homogeneity and unimodularity of the pairing.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let bad = |msg: String| Err(Error::semantic(format!("frobenius algebra {}", self.name), msg));
        if n == 0 || self.gradings.len() != n || self.product.len() != n || self.pairing.len() != n {
            return bad("basis, gradings, product and pairing sizes disagree".into());
        }
        if self.product.iter().any(|r| r.len() != n) || self.pairing.iter().any(|r| r.len() != n) {
            return bad("product and pairing must be square".into());
        }
        if self.unit >= n || self.gradings[self.unit] != 0 {
            return bad("unit must be a basis element of degree 0".into());
        }
        let mut sorted = self.labels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != n || self.labels.iter().any(|c| *c == '_' || c.is_whitespace() || *c == '@') {
            return bad("labels must be distinct and may not be '_', '@' or whitespace".into());
        }
        let g = &self.gradings;
        for a in 0..n {
            for b in 0..n {
                for (c, v) in &self.product[a][b] {
                    if *c >= n {
                        return bad(format!("product index {c} out of range"));
                    }
                    if *v != 0 && g[*c] != g[a] + g[b] {
                        return bad(format!("product {}{} is not homogeneous", self.labels[a], self.labels[b]));
                    }
                }
            }
            let one: BTreeMap<usize, i64> = [(a, 1)].into_iter().collect();
            if self.mul(self.unit, a) != one || self.mul(a, self.unit) != one {
                return bad(format!("unit fails on {}", self.labels[a]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab: BTreeMap<usize, i64> = self.mul(a, b);
                for c in 0..n {
                    let left = self.mul_vec(&ab, c, false);
                    let bc = self.mul(b, c);
                    let right = self.mul_vec(&bc, a, true);
                    if left != right {
                        return bad(format!(
                            "product not associative on ({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[c]
                        ));
                    }
                    let pair = |x: &BTreeMap<usize, i64>, y: usize, left_slot: bool| -> i64 {
                        x.iter()
                            .map(|(&i, &v)| v * if left_slot { self.pairing[i][y] } else { self.pairing[y][i] })
                            .sum()
                    };
                    if pair(&ab, c, true) != pair(&bc, a, false) {
                        return bad(format!(
                            "pairing not invariant on ({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[c]
                        ));
                    }
                }
            }
        }
        let mut degree = None;
        for a in 0..n {
            for b in 0..n {
                let v = self.pairing[a][b];
                if v != parity(g[a] * g[b]) * self.pairing[b][a] {
                    return bad("pairing is not graded symmetric".into());
                }
                if v != 0 {
                    match degree {
                        None => degree = Some(g[a] + g[b]),
                        Some(d) if d != g[a] + g[b] => return bad("pairing is not homogeneous".into()),
                        _ => {}
                    }
                }
            }
        }
        let p =
            IntMatrix::from_rows(self.pairing.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())?;
        if !determinant(&p).abs().is_one() {
            return bad("pairing is not unimodular".into());
        }
        Ok(())
    }

    fn inverse_pairing(&self) -> Vec<Vec<BigRational>> {
        let n = self.dim();
        let p = RatMatrix::from_rows(
            self.pairing.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect(),
        )
        .expect("square");
        let space = crate::linalg::ColumnSpace::new(&p);
        // Column c of P^{-1} solves P x = e_c.
        let mut inv = vec![vec![BigRational::zero(); n]; n];
        for c in 0..n {
            let mut e = vec![BigRational::zero(); n];
            e[c] = BigRational::one();
            let x = space.solve(&e).expect("length matches").expect("pairing is invertible");
            for (r, v) in x.into_iter().enumerate() {
                inv[r][c] = v;
            }
        }
        inv
    }
}

/// A basis map `e_{b1} ⊗ ... ⊗ e_{bk} -> e_{b0}`, stored as `(b0, b1, ..., bk)`.
type Tuple = Vec<usize>;

struct EndData<'a> {
    frob: &'a FrobeniusSpec,
}

impl EndData<'_> {
    fn grading(&self, t: &[usize]) -> i64 {
        self.frob.gradings[t[0]] - t[1..].iter().map(|&b| self.frob.gradings[b]).sum::<i64>()
    }

    fn name(&self, t: &[usize]) -> String {
        let mut s = String::with_capacity(t.len() + 2);
        s.push('f');
        s.push(self.frob.labels[t[0]]);
        s.push('_');
        s.extend(t[1..].iter().map(|&b| self.frob.labels[b]));
        s
    }

    fn tuples(&self, arity: usize) -> Vec<Tuple> {
        let n = self.frob.dim();
        let mut out = vec![Vec::new()];
        for _ in 0..=arity {
            out = out.into_iter().flat_map(|t: Tuple| (0..n).map(move |b| [t.clone(), vec![b]].concat())).collect();
        }
        out
    }

    /// `f ∘_i g` on basis maps: nonzero iff the `i`-th input of `f` is the
    /// output of `g`; `g` passes the first `i - 1` inputs (Koszul sign).
    fn compose(&self, f: &[usize], i: usize, g: &[usize]) -> Option<(Tuple, i64)> {
        if f[i] != g[0] {
            return None;
        }
        let passed: i64 = f[1..i].iter().map(|&b| self.frob.gradings[b]).sum();
        let out = [&f[..i], &g[1..], &f[i + 1..]].concat();
        Some((out, parity(self.grading(g) * passed)))
    }

    /// The rotation `τ`, transported through the pairing.
    ///
    /// With `Φ(f)(a0, ..., ak) = (-1)^{|f||a0|} <a0, f(a1, ..., ak)>`, the
    /// rotated form is `Φ(τf)(a1, ..., ak, a0) = (-1)^{|a0|(|a1|+...+|ak|)} Φ(f)(a0, ..., ak)`,
    /// and `τf` is read back through the inverse pairing.
    fn tau(&self, f: &[usize], pinv: &[Vec<BigRational>]) -> Vec<(Tuple, BigRational)> {
        let g = &self.frob.gradings;
        let d = self.grading(f);
        let k = f.len() - 1;
        let tail: i64 = f[1..].iter().map(|&b| g[b]).sum();
        let mut rotated: BTreeMap<Tuple, i64> = BTreeMap::new();
        for (a0, &ga0) in g.iter().enumerate() {
            let p = self.frob.pairing[a0][f[0]];
            if p == 0 {
                continue;
            }
            let phi = parity(d * ga0) * p;
            let mut b: Tuple = f[1..].to_vec();
            b.push(a0);
            *rotated.entry(b).or_insert(0) += parity(ga0 * tail) * phi;
        }
        let mut out: BTreeMap<Tuple, BigRational> = BTreeMap::new();
        for (b, v) in rotated {
            if v == 0 {
                continue;
            }
            let b0 = b[0];
            let scale = BigRational::from_integer((parity(d * g[b0]) * v).into());
            for (c, row) in pinv.iter().enumerate() {
                let w = &row[b0];
                if w.is_zero() {
                    continue;
                }
                let mut t = Vec::with_capacity(k + 1);
                t.push(c);
                t.extend_from_slice(&b[1..]);
                *out.entry(t).or_insert_with(BigRational::zero) += w * &scale;
            }
        }
        out.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

/// Generator name of the basis map `(b0; b1, ..., bk)` in the endomorphism operad.
pub fn endomorphism_generator_name(frob: &FrobeniusSpec, tuple: &[usize]) -> String {
    EndData { frob }.name(tuple)
}

/// The cyclic endomorphism operad `O(k) = Hom(A^{⊗k}, A)` of a graded
/// Frobenius algebra, up to arity `cap`.
///
/// The basis of `O(k)` is the maps `(b0; b1, ..., bk)` sending
/// `e_{b1} ⊗ ... ⊗ e_{bk}` to `e_{b0}` and every other basis tensor to 0,
/// named `f<b0>_<b1...bk>` from the algebra's labels. The result still has to
/// pass the validators before it is used.
pub fn builtin_frobenius_end(frob: &FrobeniusSpec, cap: usize) -> Result<OperadSpec> {
    builtin_frobenius_end_with_limit(frob, cap, max_rank_from_env())
}

pub fn builtin_frobenius_end_with_limit(frob: &FrobeniusSpec, cap: usize, max_rank: usize) -> Result<OperadSpec> {
    frob.validate()?;
    if cap < 3 {
        return Err(Error::InvalidInput(format!("arity cap {cap} is too small; at least 3 is needed")));
    }
    let n = frob.dim();
    let top_rank = n.checked_pow(cap as u32 + 1).unwrap_or(usize::MAX);
    if top_rank > max_rank {
        return Err(Error::RankLimit { arity: cap, rank: top_rank, limit: max_rank });
    }
    let data = EndData { frob };
    let tuples: Vec<Vec<Tuple>> = (0..=cap).map(|k| data.tuples(k)).collect();
    let components = tuples.iter().map(|ts| ts.iter().map(|t| (data.name(t), data.grading(t))).collect()).collect();
    let mut spec = OperadSpec::new(format!("frobenius:{}", frob.name), Ring::Integers, components)?;
    let index: Vec<BTreeMap<Tuple, usize>> = tuples
        .iter()
        .enumerate()
        .map(|(k, ts)| ts.iter().map(|t| (t.clone(), spec.index_of(k, &data.name(t)).unwrap())).collect())
        .collect();

    for l in 1..=cap {
        for m in 0..=cap + 1 - l {
            for f in &tuples[l] {
                for i in 1..=l {
                    for g in tuples[m].iter().filter(|g| g[0] == f[i]) {
                        let (out, s) = data.compose(f, i, g).expect("slot matches");
                        let key = ComposeKey { x_arity: l, x: index[l][f], slot: i, y_arity: m, y: index[m][g] };
                        spec.set_composition(key, vec![(index[l + m - 1][&out], BigRational::from_integer(s.into()))])?;
                    }
                }
            }
        }
    }

    let q = |v: i64| BigRational::from_integer(v.into());
    let id = OperadElement::from_terms(1, (0..n).map(|b| (index[1][&vec![b, b]], BigRational::one())));
    let e = OperadElement::basis(0, index[0][&vec![frob.unit]]);
    let mut mu = OperadElement::zero(2);
    for a in 0..n {
        for b in 0..n {
            for &(c, v) in &frob.product[a][b] {
                mu.add_term(index[2][&vec![c, a, b]], &q(v));
            }
        }
    }
    spec.set_identity(id)?;
    spec.set_unit(e)?;
    spec.set_multiplication(mu)?;

    let pinv = frob.inverse_pairing();
    let mut mats = Vec::with_capacity(cap + 1);
    for (k, ts) in tuples.iter().enumerate() {
        let mut triplets = Vec::new();
        for f in ts {
            for (t, v) in data.tau(f, &pinv) {
                triplets.push((index[k][&t], index[k][f], v));
            }
        }
        mats.push(RatMatrix::from_triplets(ts.len(), ts.len(), triplets)?);
    }
    spec.set_tau(Some(mats))?;
    spec.set_sparse(true);
    spec.set_metadata("source", format!("endomorphism operad of the Frobenius algebra {}", frob.name));
    spec.set_metadata(
        "basis",
        "f<b0>_<b1..bk> maps e_b1 (x) ... (x) e_bk to e_b0; grading = |b0| - sum |bi|".to_string(),
    );
    spec.set_metadata(
        "tau_convention",
        "Phi(f)(a0..ak) = (-1)^{|f||a0|} <a0, f(a1..ak)>; Phi(tau f)(a1..ak,a0) = (-1)^{|a0|(|a1|+..+|ak|)} Phi(f)(a0..ak)"
            .to_string(),
    );
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_algebras_are_frobenius() {
        for f in [FrobeniusSpec::ground(), FrobeniusSpec::dual1(), FrobeniusSpec::ext2(), FrobeniusSpec::cp2()] {
            f.validate().unwrap_or_else(|e| panic!("{}: {e}", f.name));
        }
    }

    #[test]
    fn broken_pairing_is_rejected() {
        let mut f = FrobeniusSpec::dual1();
        f.pairing[0][1] = 2;
        f.pairing[1][0] = 2;
        assert!(f.validate().is_err());
    }

    #[test]
    fn ext2_products() {
        let f = FrobeniusSpec::ext2();
        assert_eq!(f.product[1][2], vec![(3, 1)]);
        assert_eq!(f.product[2][1], vec![(3, -1)]);
        assert!(f.product[1][1].is_empty());
        assert_eq!(f.pairing[1][2], 1);
        assert_eq!(f.pairing[0][3], 1);
    }

    #[test]
    fn ranks_are_powers_of_dimension() {
        let spec = builtin_frobenius_end(&FrobeniusSpec::dual1(), 4).unwrap();
        for k in 0..=4 {
            assert_eq!(spec.rank(k), 1 << (k + 1));
        }
        assert_eq!(spec.generators(0)[0].name, "f1_");
    }

    #[test]
    fn rank_limit() {
        let r = builtin_frobenius_end_with_limit(&FrobeniusSpec::dual1(), 5, 32);
        assert_eq!(r, Err(Error::RankLimit { arity: 5, rank: 64, limit: 32 }));
    }
}
