//! Chain-level operations on the Hochschild complex.
//!
//! Inputs may be inhomogeneous; every operation is extended bilinearly from
//! its homogeneous parts. For `x` of arity `l` and internal grading `a`, the
//! total degree is `|x| = a - l`.

use crate::error::{Error, Result};
use crate::hochschild::{codegeneracy, degeneracy_witness};
use crate::operad::{OperadElement, OperadSpec};

fn parts(spec: &OperadSpec, x: &OperadElement) -> Vec<(i64, OperadElement)> {
    spec.homogeneous_parts(x)
}

/// Total degree of a homogeneous part.
fn degree(grading: i64, arity: usize) -> i64 {
    grading - arity as i64
}

/// `x • y = (-1)^{l ỹ} μ(x, y)`, of arity `l + m`.
pub fn bullet(spec: &OperadSpec, x: &OperadElement, y: &OperadElement) -> Result<OperadElement> {
    let (l, m) = (x.arity(), y.arity());
    let mut out = OperadElement::zero(l + m);
    for (_, xa) in parts(spec, x) {
        for (b, yb) in parts(spec, y) {
            out += &spec.mu_apply(&xa, &yb)?.signed(l as i64 * b);
        }
    }
    Ok(out)
}

/// `x ∘̄ y = Σ_{i=1}^{l} (-1)^{(m-1)(l-i) + (l-1)ỹ} x ∘_i y`, of arity `l + m - 1`.
///
/// Zero when `l = 0`.
pub fn bar_circ(spec: &OperadSpec, x: &OperadElement, y: &OperadElement) -> Result<OperadElement> {
    let (l, m) = (x.arity(), y.arity());
    let mut out = OperadElement::zero((l + m).saturating_sub(1));
    for (_, xa) in parts(spec, x) {
        for (b, yb) in parts(spec, y) {
            for i in 1..=l {
                let e = (m as i64 - 1) * (l - i) as i64 + (l as i64 - 1) * b;
                out += &spec.compose(&xa, i, &yb)?.signed(e);
            }
        }
    }
    Ok(out)
}

/// `[x, y] = x ∘̄ y - (-1)^{(|x|+1)(|y|+1)} y ∘̄ x`.
pub fn bracket(spec: &OperadSpec, x: &OperadElement, y: &OperadElement) -> Result<OperadElement> {
    let (l, m) = (x.arity(), y.arity());
    let mut out = OperadElement::zero((l + m).saturating_sub(1));
    for (a, xa) in parts(spec, x) {
        for (b, yb) in parts(spec, y) {
            out += &bar_circ(spec, &xa, &yb)?;
            let e = (degree(a, l) + 1) * (degree(b, m) + 1);
            out -= &bar_circ(spec, &yb, &xa)?.signed(e);
        }
    }
    Ok(out)
}

/// `σ_k = s^{k-1} τ_k`, from arity `k >= 1` to arity `k - 1`.
pub fn sigma(spec: &OperadSpec, x: &OperadElement) -> Result<OperadElement> {
    let k = x.arity();
    if k == 0 {
        return Err(Error::InvalidInput("sigma needs arity at least 1".into()));
    }
    codegeneracy(spec, k - 1, &spec.tau(x)?)
}

/// `(-1)^{x̃} Σ_{i=1}^{k} (-1)^{i(k-1)} τ_{k-1}^{-i}(w)` for the arity-`(k-1)`
/// element `w` built from a homogeneous part of grading `x̃`.
fn orbit_sum(spec: &OperadSpec, grading: i64, k: usize, w: &OperadElement) -> Result<OperadElement> {
    let mut out = OperadElement::zero(k - 1);
    for i in 1..=k {
        out += &spec.tau_pow(w, -(i as i64))?.signed((i * (k - 1)) as i64);
    }
    Ok(out.signed(grading))
}

/// Connes' boundary on the full complex:
/// `B_k(x) = (-1)^{x̃} Σ_{i=1}^{k} (-1)^{i(k-1)} τ_{k-1}^{-i} s^{k-1} τ_k (1 - (-1)^k τ_k)(x)`.
///
/// The sign on `τ_k` inside the bracket makes `B` square to zero and
/// anticommute with `∂` in every arity; on normalized chains it agrees with
/// [`connes_b_normalized`] and with [`connes_b_literal`]. `B` is zero on arity 0.
pub fn connes_b(spec: &OperadSpec, x: &OperadElement) -> Result<OperadElement> {
    connes_b_with(spec, x, true)
}

/// The variant with `(1 - τ_k)` in place of `(1 - (-1)^k τ_k)`.
///
/// On the full complex this fails `B B = 0` and `B ∂ = -∂ B` in even arity
/// once the operad has odd elements; it is kept for comparison.
pub fn connes_b_literal(spec: &OperadSpec, x: &OperadElement) -> Result<OperadElement> {
    connes_b_with(spec, x, false)
}

fn connes_b_with(spec: &OperadSpec, x: &OperadElement, signed: bool) -> Result<OperadElement> {
    let k = x.arity();
    if !spec.has_tau() {
        return Err(Error::TauAbsent);
    }
    if k == 0 || x.is_zero() {
        return Ok(OperadElement::zero(k.saturating_sub(1)));
    }
    let mut out = OperadElement::zero(k - 1);
    for (a, xa) in parts(spec, x) {
        let t = spec.tau(&xa)?;
        let e = if signed { k as i64 } else { 0 };
        let inner = xa - t.signed(e);
        let w = sigma(spec, &inner)?;
        out += &orbit_sum(spec, a, k, &w)?;
    }
    Ok(out)
}

/// Connes' boundary on normalized chains:
/// `B_k(x) = (-1)^{x̃} Σ_{i=1}^{k} (-1)^{i(k-1)} τ_{k-1}^{-i} σ_k(x)`.
pub fn connes_b_normalized(spec: &OperadSpec, x: &OperadElement) -> Result<OperadElement> {
    if let Some((index, w)) = degeneracy_witness(spec, x) {
        return Err(Error::NotNormalized { index, witness: spec.display(&w) });
    }
    connes_b_sigma(spec, x)
}

/// The σ-form of `B` without the normalization check.
pub(crate) fn connes_b_sigma(spec: &OperadSpec, x: &OperadElement) -> Result<OperadElement> {
    let k = x.arity();
    if !spec.has_tau() {
        return Err(Error::TauAbsent);
    }
    if k == 0 || x.is_zero() {
        return Ok(OperadElement::zero(k.saturating_sub(1)));
    }
    let mut out = OperadElement::zero(k - 1);
    for (a, xa) in parts(spec, x) {
        out += &orbit_sum(spec, a, k, &sigma(spec, &xa)?)?;
    }
    Ok(out)
}

/// `Z(x, y) = (-1)^{|x||y| + a + b} Σ_{j=1}^{l} (-1)^{j(l+m-1)} τ_{l+m-1}^{-j} σ_{l+m}(y • x)`.
pub fn z_term(spec: &OperadSpec, x: &OperadElement, y: &OperadElement) -> Result<OperadElement> {
    let (l, m) = (x.arity(), y.arity());
    let mut out = OperadElement::zero((l + m).saturating_sub(1));
    if l == 0 {
        return Ok(out);
    }
    if !spec.has_tau() {
        return Err(Error::TauAbsent);
    }
    for (a, xa) in parts(spec, x) {
        for (b, yb) in parts(spec, y) {
            let s = sigma(spec, &bullet(spec, &yb, &xa)?)?;
            let mut sum = OperadElement::zero(l + m - 1);
            for j in 1..=l {
                sum += &spec.tau_pow(&s, -(j as i64))?.signed((j * (l + m - 1)) as i64);
            }
            out += &sum.signed(degree(a, l) * degree(b, m) + a + b);
        }
    }
    Ok(out)
}

/// `H_{j,p}(x, y) = (-1)^{j(l-1) + (m-1)(p+1+l) + l b} τ_{l+m-2}^{-j} σ_{l+m-1}(x ∘_{p-j+1} y)`
/// for `1 <= j <= p`, `p - j + 1 <= l`.
pub fn h_jp(spec: &OperadSpec, x: &OperadElement, y: &OperadElement, j: usize, p: usize) -> Result<OperadElement> {
    let (l, m) = (x.arity(), y.arity());
    if j == 0 || j > p || p - j + 1 > l {
        return Err(Error::InvalidInput(format!("H_{{{j},{p}}} needs 1 <= j <= p and p - j + 1 <= {l}")));
    }
    let mut out = OperadElement::zero((l + m).saturating_sub(2));
    if l + m < 2 {
        return Ok(out);
    }
    if !spec.has_tau() {
        return Err(Error::TauAbsent);
    }
    for (_, xa) in parts(spec, x) {
        for (b, yb) in parts(spec, y) {
            let c = spec.compose(&xa, p - j + 1, &yb)?;
            if c.is_zero() {
                continue;
            }
            let t = spec.tau_pow(&sigma(spec, &c)?, -(j as i64))?;
            let e = (j * (l - 1)) as i64 + (m as i64 - 1) * (p + 1 + l) as i64 + l as i64 * b;
            out += &t.signed(e);
        }
    }
    Ok(out)
}

/// `H(x, y) = Σ_{1 <= j <= p <= l-1} H_{j,p}(x, y)`; zero when `l < 2`.
pub fn h_homotopy(spec: &OperadSpec, x: &OperadElement, y: &OperadElement) -> Result<OperadElement> {
    let l = x.arity();
    let mut out = OperadElement::zero((l + y.arity()).saturating_sub(2));
    for p in 1..l {
        for j in 1..=p {
            out += &h_jp(spec, x, y, j, p)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defs::builtin_assoc;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn assoc_examples() {
        let spec = builtin_assoc(6).unwrap();
        let a = |k| OperadElement::basis(k, 0);
        assert_eq!(bullet(&spec, &a(2), &a(3)).unwrap(), a(5));
        assert_eq!(bar_circ(&spec, &a(1), &a(1)).unwrap(), a(1));
        assert_eq!(bar_circ(&spec, &a(2), &a(1)).unwrap(), a(2).scaled(&q(2)));
        assert_eq!(bar_circ(&spec, &a(1), &a(2)).unwrap(), a(2));
        assert!(bar_circ(&spec, &a(0), &a(2)).unwrap().is_zero());
        assert!(bracket(&spec, &a(1), &a(1)).unwrap().is_zero());
        assert_eq!(bracket(&spec, &a(2), &a(1)).unwrap(), a(2));
        assert_eq!(connes_b(&spec, &a(1)).unwrap(), a(0).scaled(&q(2)));
        assert!(connes_b_normalized(&spec, &a(0)).unwrap().is_zero());
        assert!(matches!(connes_b_normalized(&spec, &a(2)), Err(Error::NotNormalized { .. })));
        assert!(h_homotopy(&spec, &a(1), &a(3)).unwrap().is_zero());
        assert!(z_term(&spec, &a(0), &a(3)).unwrap().is_zero());
    }

    #[test]
    fn literal_b_vanishes_on_assoc() {
        let spec = builtin_assoc(6).unwrap();
        for k in 0..=6 {
            assert!(connes_b_literal(&spec, &OperadElement::basis(k, 0)).unwrap().is_zero());
        }
        // The signed form picks up (1 + τ) = 2 in odd arity.
        assert_eq!(connes_b(&spec, &OperadElement::basis(3, 0)).unwrap(), OperadElement::basis(2, 0).scaled(&q(6)));
    }
}
