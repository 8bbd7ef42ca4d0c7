use std::ops::Deref;

use super::element::OperadElement;
use super::spec::{ComposeKey, OperadSpec};
use crate::error::{Error, Result};
use crate::report::{CheckResult, VerificationReport, Witness};

fn basis(spec: &OperadSpec, arity: usize) -> Vec<OperadElement> {
    (0..spec.rank(arity)).map(|i| OperadElement::basis(arity, i)).collect()
}

fn witness(spec: &OperadSpec, instance: String, lhs: &OperadElement, rhs: &OperadElement) -> Witness {
    Witness { instance, lhs: spec.display(lhs), rhs: spec.display(rhs) }
}

fn name(spec: &OperadSpec, x: &OperadElement) -> String {
    spec.display(x)
}

/// Checks the graded operad axioms and the multiplicative structure on every
/// basis element within the arity cap.
///
/// Sequential composition is sign-free; parallel composition carries the
/// Koszul sign `(-1)^{ỹz̃}`.
pub fn validate_operad(spec: &OperadSpec) -> VerificationReport {
    let mut report = VerificationReport::new("operad axioms", spec.name());
    let cap = spec.arity_cap();
    let bases: Vec<Vec<OperadElement>> = (0..=cap).map(|k| basis(spec, k)).collect();

    let mut grading = CheckResult::single("grading additivity");
    for (key, out) in spec.compositions() {
        let expected = spec.grading(key.x_arity, key.x) + spec.grading(key.y_arity, key.y);
        for (o, _) in out {
            let got = spec.grading(key.out_arity(), *o);
            grading.main().record(got == expected, || Witness {
                instance: compose_label(spec, &key),
                lhs: format!("term {} of grading {got}", spec.generator(key.out_arity(), *o).name),
                rhs: format!("grading {expected}"),
            });
        }
    }
    report.push(grading);

    let mut seq = CheckResult::single("sequential associativity");
    let mut par = CheckResult::single("parallel associativity");
    for l in 1..=cap {
        for m in 0..=cap {
            for n in 0..=cap {
                if l + m + n < 2 || l + m + n - 2 > cap || l + m - 1 > cap {
                    continue;
                }
                for x in &bases[l] {
                    for y in &bases[m] {
                        for i in 1..=l {
                            let xy = spec.compose(x, i, y).expect("within cap");
                            for z in &bases[n] {
                                for j in 1..=m {
                                    let lhs = spec.compose(&xy, i - 1 + j, z).expect("within cap");
                                    let yz = spec.compose(y, j, z).expect("within cap");
                                    let rhs = spec.compose(x, i, &yz).expect("within cap");
                                    seq.main().record(lhs == rhs, || {
                                        witness(
                                            spec,
                                            format!(
                                                "({} o{i} {}) o{} {} vs {} o{i} ({} o{j} {})",
                                                name(spec, x),
                                                name(spec, y),
                                                i - 1 + j,
                                                name(spec, z),
                                                name(spec, x),
                                                name(spec, y),
                                                name(spec, z)
                                            ),
                                            &lhs,
                                            &rhs,
                                        )
                                    });
                                }
                                // x o_j z alone can exceed the cap when y is nullary.
                                for j in (1..i).filter(|_| l + n - 1 <= cap) {
                                    let lhs = spec.compose(&xy, j, z).expect("within cap");
                                    let xz = spec.compose(x, j, z).expect("within cap");
                                    let sign = spec.grading(m, y.terms().next().unwrap().0)
                                        * spec.grading(n, z.terms().next().unwrap().0);
                                    let rhs = spec.compose(&xz, i + n - 1, y).expect("within cap").signed(sign);
                                    par.main().record(lhs == rhs, || {
                                        witness(
                                            spec,
                                            format!(
                                                "({} o{i} {}) o{j} {} vs ({} o{j} {}) o{} {}",
                                                name(spec, x),
                                                name(spec, y),
                                                name(spec, z),
                                                name(spec, x),
                                                name(spec, z),
                                                i + n - 1,
                                                name(spec, y)
                                            ),
                                            &lhs,
                                            &rhs,
                                        )
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report.push(seq);
    report.push(par);

    let id = spec.identity();
    let mut unit = CheckResult::single("identity unit");
    for (k, xs) in bases.iter().enumerate() {
        for x in xs {
            if k >= 1 {
                for i in 1..=k {
                    let lhs = spec.compose(x, i, id).expect("within cap");
                    unit.main().record(&lhs == x, || witness(spec, format!("{} o{i} id", name(spec, x)), &lhs, x));
                }
            }
            let lhs = spec.compose(id, 1, x).expect("within cap");
            unit.main().record(&lhs == x, || witness(spec, format!("id o1 {}", name(spec, x)), &lhs, x));
        }
    }
    report.push(unit);

    let (mu, e) = (spec.multiplication(), spec.unit());
    let mut assoc = CheckResult::single("multiplication associative");
    match (spec.compose(mu, 1, mu), spec.compose(mu, 2, mu)) {
        (Ok(l), Ok(r)) => {
            assoc.main().record(l == r, || witness(spec, "mu o1 mu vs mu o2 mu".into(), &l, &r));
            report.push(assoc);
        }
        _ => report.note("mu o1 mu lies beyond the arity cap; associativity of mu not checked"),
    }

    let mut munit = CheckResult::single("multiplication unital");
    for slot in 1..=2 {
        let lhs = spec.compose(mu, slot, e).expect("within cap");
        munit.main().record(&lhs == id, || witness(spec, format!("mu o{slot} e"), &lhs, id));
    }
    report.push(munit);

    let mut dist = CheckResult::single("distinguished elements nonzero of grading 0");
    for (label, el) in [("id", id), ("e", e), ("mu", mu)] {
        let ok = !el.is_zero() && spec.grading_of(el) == Some(0);
        dist.main().record(ok, || Witness {
            instance: label.into(),
            lhs: spec.display(el),
            rhs: "nonzero, grading 0".into(),
        });
    }
    report.push(dist);
    report
}

fn compose_label(spec: &OperadSpec, key: &ComposeKey) -> String {
    format!("{} o{} {}", spec.generator(key.x_arity, key.x).name, key.slot, spec.generator(key.y_arity, key.y).name)
}

/// Checks the cyclic axioms on every basis element within the arity cap.
///
/// The compatibility at slot 1 with a nullary `y` is not well-typed and is
/// not checked.
pub fn validate_cyclic(spec: &OperadSpec) -> VerificationReport {
    let mut report = VerificationReport::new("cyclic axioms", spec.name());
    if !spec.has_tau() {
        let mut c = CheckResult::single("tau present");
        c.main().record(false, || Witness { instance: "tau".into(), lhs: "absent".into(), rhs: "present".into() });
        report.push(c);
        return report;
    }
    let cap = spec.arity_cap();
    let bases: Vec<Vec<OperadElement>> = (0..=cap).map(|k| basis(spec, k)).collect();
    let tau = |x: &OperadElement| spec.tau(x).expect("tau present");

    let mut order = CheckResult::single("tau order k+1");
    let mut grading = CheckResult::single("tau preserves grading");
    for (k, xs) in bases.iter().enumerate() {
        for x in xs {
            let once = tau(x);
            let g = spec.grading_of(x);
            for (i, _) in once.terms() {
                let gi = spec.grading(k, i);
                grading.main().record(Some(gi) == g, || Witness {
                    instance: format!("tau({})", name(spec, x)),
                    lhs: format!("term {} of grading {gi}", spec.generator(k, i).name),
                    rhs: format!("grading {}", g.unwrap_or_default()),
                });
            }
            let mut y = once;
            for _ in 1..=k {
                y = tau(&y);
            }
            order.main().record(&y == x, || witness(spec, format!("tau^{} ({})", k + 1, name(spec, x)), &y, x));
        }
    }
    report.push(order);
    report.push(grading);

    let mut fixed = CheckResult::single("tau fixes e and mu");
    for (label, el) in [("e", spec.unit()), ("mu", spec.multiplication())] {
        let t = tau(el);
        fixed.main().record(&t == el, || witness(spec, format!("tau({label})"), &t, el));
    }
    report.push(fixed);

    let mut compat = CheckResult::single("tau compatible with composition");
    for l in 1..=cap {
        for m in 0..=cap + 1 - l {
            for x in &bases[l] {
                let tx = tau(x);
                let a = spec.grading_of(x).unwrap();
                for y in &bases[m] {
                    let b = spec.grading_of(y).unwrap();
                    for i in 1..=l {
                        if i == 1 && m == 0 {
                            continue;
                        }
                        let lhs = tau(&spec.compose(x, i, y).expect("within cap"));
                        let rhs = if i >= 2 {
                            spec.compose(&tx, i - 1, y).expect("within cap")
                        } else {
                            spec.compose(&tau(y), m, &tx).expect("within cap").signed(a * b)
                        };
                        compat.main().record(lhs == rhs, || {
                            witness(spec, format!("tau({} o{i} {})", name(spec, x), name(spec, y)), &lhs, &rhs)
                        });
                    }
                }
            }
        }
    }
    report.push(compat);
    report
}

/// An operad spec that passed [`validate_operad`] and, when it carries a
/// cyclic structure, [`validate_cyclic`].
#[derive(Clone, Debug, PartialEq)]
pub struct ValidatedSpec(OperadSpec);

impl ValidatedSpec {
    /// Runs the validators; the combined report is returned either way.
    pub fn validate(spec: OperadSpec) -> (std::result::Result<ValidatedSpec, OperadSpec>, VerificationReport) {
        let mut report = validate_operad(&spec);
        if spec.has_tau() {
            report.merge(validate_cyclic(&spec));
        }
        report.suite = "structural axioms".into();
        if report.passed() {
            (Ok(ValidatedSpec(spec)), report)
        } else {
            (Err(spec), report)
        }
    }

    /// Validates, converting a failure into [`Error::ValidationFailed`] that
    /// names the first failing check.
    pub fn new(spec: OperadSpec) -> Result<ValidatedSpec> {
        match Self::validate(spec) {
            (Ok(v), _) => Ok(v),
            (Err(_), report) => {
                let first = report.first_failure().map(|c| c.name.clone()).unwrap_or_default();
                Err(Error::ValidationFailed(first))
            }
        }
    }

    pub fn spec(&self) -> &OperadSpec {
        &self.0
    }

    pub fn into_inner(self) -> OperadSpec {
        self.0
    }
}

impl Deref for ValidatedSpec {
    type Target = OperadSpec;

    fn deref(&self) -> &OperadSpec {
        &self.0
    }
}
