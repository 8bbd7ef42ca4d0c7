use std::sync::LazyLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use ophh_core::bv::{bar_circ, bullet, connes_b};
use ophh_core::hochschild::hochschild_differential;
use ophh_core::linalg::{integer_kernel_basis, rank, snf, IntMatrix};
use ophh_core::{
    builtin_assoc, builtin_frobenius_end, compute_hh, parse_operad_file, serialize_operad, Flavor, FrobeniusSpec,
    HomologyTable, OperadElement, OperadSpec, Ring,
};
use proptest::prelude::*;

static DUAL1: LazyLock<OperadSpec> = LazyLock::new(|| builtin_frobenius_end(&FrobeniusSpec::dual1(), 6).unwrap());
static EXT2: LazyLock<OperadSpec> = LazyLock::new(|| builtin_frobenius_end(&FrobeniusSpec::ext2(), 4).unwrap());
static TABLE: LazyLock<HomologyTable<'static>> =
    LazyLock::new(|| compute_hh(&DUAL1, 4, Flavor::Normalized, Ring::Rationals).unwrap());

fn element(spec: &OperadSpec, arity: usize, coeffs: &[i64]) -> OperadElement {
    let r = spec.rank(arity);
    OperadElement::from_terms(arity, coeffs.iter().cycle().take(r).enumerate().map(|(i, &c)| (i, q(c))))
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..40)
}

fn int_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -9i64..=9], c), r).prop_map(
            |rows| {
                IntMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect())
                    .unwrap()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalisation(a in int_matrix()) {
        let s = snf(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        for (r, c, v) in s.d.iter() {
            prop_assert!(r == c && v.is_positive(), "entry ({}, {}) = {}", r, c, v);
        }
        let f = s.invariant_factors();
        prop_assert!(f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        prop_assert_eq!(f.len(), rank(&a.to_rational()));
    }

    #[test]
    fn integer_kernel_spans_the_right_dimension(a in int_matrix()) {
        let kernel = integer_kernel_basis(&a);
        prop_assert_eq!(kernel.len(), a.cols() - rank(&a.to_rational()));
        for v in &kernel {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn cup_product_and_bar_circ_are_bilinear(
        l in 0usize..=2, m in 0usize..=2, x1 in coeffs(), x2 in coeffs(), y in coeffs(), c in -3i64..=3
    ) {
        let spec = &*EXT2;
        let (x1, x2, y) = (element(spec, l, &x1), element(spec, l, &x2), element(spec, m, &y));
        for op in [bullet, bar_circ] {
            let sum = op(spec, &(x1.clone() + x2.clone()), &y).unwrap();
            prop_assert_eq!(sum, op(spec, &x1, &y).unwrap() + op(spec, &x2, &y).unwrap());
            let scaled = op(spec, &y, &x1.scaled(&q(c))).unwrap();
            prop_assert_eq!(scaled, op(spec, &y, &x1).unwrap().scaled(&q(c)));
        }
    }

    #[test]
    fn rotation_powers_add(k in 0usize..=5, x in coeffs(), p in -12i64..=12, r in -12i64..=12) {
        let spec = &*DUAL1;
        let x = element(spec, k, &x);
        let twice = spec.tau_pow(&spec.tau_pow(&x, p).unwrap(), r).unwrap();
        prop_assert_eq!(twice, spec.tau_pow(&x, p + r).unwrap());
        prop_assert_eq!(spec.tau_pow(&x, k as i64 + 1).unwrap(), x);
    }

    #[test]
    fn differential_and_connes_boundary_anticommute(k in 0usize..=4, x in coeffs()) {
        let spec = &*DUAL1;
        let x = element(spec, k, &x);
        let d = |v: &OperadElement| hochschild_differential(spec, v).unwrap();
        let b = |v: &OperadElement| connes_b(spec, v).unwrap();
        prop_assert!(d(&d(&x)).is_zero());
        prop_assert!(b(&b(&x)).is_zero());
        prop_assert_eq!(b(&d(&x)), -d(&b(&x)));
    }

    #[test]
    fn classes_ignore_boundaries(which in 0usize..8, w in coeffs()) {
        let table = &*TABLE;
        let classes = table.basis_classes();
        let class = &classes[which % classes.len()];
        let rep = table.representative(class);
        let perturbed = match class.arity.checked_sub(1).and_then(|k| table.complex().block(k, class.grading)) {
            Some(block) if block.dim() > 0 => {
                let coords: Vec<BigRational> = w.iter().cycle().take(block.dim()).map(|&c| q(c)).collect();
                rep + hochschild_differential(&DUAL1, &block.element(&coords)).unwrap()
            }
            _ => rep,
        };
        prop_assert_eq!(table.class_of(&perturbed).unwrap(), Some(class.clone()));
    }

    #[test]
    fn operad_files_round_trip(cap in 3usize..=5, frobenius in any::<bool>()) {
        let spec = if frobenius {
            builtin_frobenius_end(&FrobeniusSpec::dual1(), cap).unwrap()
        } else {
            builtin_assoc(cap).unwrap()
        };
        let text = serialize_operad(&spec);
        let back = parse_operad_file(&text).unwrap();
        prop_assert_eq!(serialize_operad(&back), text);
        prop_assert_eq!(back.tau_matrices(), spec.tau_matrices());
    }
}
