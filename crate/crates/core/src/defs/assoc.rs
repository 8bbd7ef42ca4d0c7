use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::operad::{ComposeKey, OperadElement, OperadSpec, Ring};

/// The associative operad: `O(k)` spanned by `a_k` in grading 0, with
/// `a_l ∘_i a_m = a_{l+m-1}`, `id = a_1`, `e = a_0`, `μ = a_2` and every `τ_k`
/// the identity.
pub fn builtin_assoc(cap: usize) -> Result<OperadSpec> {
    if cap < 2 {
        return Err(Error::InvalidInput(format!("arity cap {cap} is too small; at least 2 is needed")));
    }
    let components = (0..=cap).map(|k| vec![(format!("a{k}"), 0)]).collect();
    let mut spec = OperadSpec::new("assoc", Ring::Integers, components)?;
    for l in 1..=cap {
        for m in 0..=cap + 1 - l {
            for slot in 1..=l {
                let key = ComposeKey { x_arity: l, x: 0, slot, y_arity: m, y: 0 };
                spec.set_composition(key, vec![(0, BigRational::one())])?;
            }
        }
    }
    spec.set_identity(OperadElement::basis(1, 0))?;
    spec.set_unit(OperadElement::basis(0, 0))?;
    spec.set_multiplication(OperadElement::basis(2, 0))?;
    spec.set_tau(Some((0..=cap).map(|_| RatMatrix::identity(1)).collect()))?;
    spec.set_metadata("source", "associative operad");
    Ok(spec)
}
