//! The shipped framed-disks tables against the defining BV relations.

use num_rational::BigRational;
use ophh_core::bv::bracket;
use ophh_core::defs::builtin_bv_lowarity;
use ophh_core::{validate_cyclic, validate_operad, OperadElement, OperadSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec() -> OperadSpec {
    builtin_bv_lowarity().unwrap().into_inner()
}

fn el(spec: &OperadSpec, terms: &[(i64, &str)]) -> OperadElement {
    let mut out: Option<OperadElement> = None;
    for &(c, name) in terms {
        let x = spec.element_by_name(name).unwrap().scaled(&BigRational::from_integer(c.into()));
        out = Some(match out {
            Some(acc) => acc + x,
            None => x,
        });
    }
    out.unwrap()
}

#[test]
fn delta_squares_to_zero() {
    let s = spec();
    let d = el(&s, &[(1, "Dx1")]);
    assert!(s.compose(&d, 1, &d).unwrap().is_zero());
    assert!(s.compose(&d, 1, s.unit()).unwrap().is_zero());
}

#[test]
fn bracket_is_the_defect_of_delta_on_products() {
    let s = spec();
    let lhs = s.compose(&el(&s, &[(1, "Dx1")]), 1, s.multiplication()).unwrap();
    assert_eq!(lhs, el(&s, &[(1, "[x1,x2]"), (1, "Dx1.x2"), (1, "x1.Dx2")]));
}

#[test]
fn bracket_is_a_derivation_of_the_product() {
    let s = spec();
    let br = el(&s, &[(1, "[x1,x2]")]);
    let lhs = s.compose(&br, 1, s.multiplication()).unwrap();
    assert_eq!(lhs, el(&s, &[(1, "x1.[x2,x3]"), (1, "[x1,x3].x2")]));
    let right = s.compose(&br, 2, s.multiplication()).unwrap();
    assert_eq!(right, el(&s, &[(1, "[x1,x2].x3"), (1, "[x1,x3].x2")]));
}

#[test]
fn hochschild_bracket_with_delta_recovers_the_bv_bracket() {
    let s = spec();
    let got = bracket(&s, &el(&s, &[(1, "Dx1")]), s.multiplication()).unwrap();
    assert_eq!(got, el(&s, &[(1, "[x1,x2]")]));
}

#[test]
fn tables_are_fault_sensitive() {
    let s = spec();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let entries: Vec<_> =
        s.compositions().into_iter().filter(|(_, v)| !v.is_empty()).map(|(k, v)| (k, v.to_vec())).collect();
    for _ in 0..20 {
        let (key, value) = &entries[rng.gen_range(0..entries.len())];
        let t = rng.gen_range(0..value.len());
        let mut flipped = value.clone();
        flipped[t].1 = -flipped[t].1.clone();
        let mut broken = s.clone();
        broken.set_composition(*key, flipped).unwrap();
        let mut report = validate_operad(&broken);
        report.merge(validate_cyclic(&broken));
        assert!(!report.passed(), "flip of {key:?} went undetected");
    }
}
