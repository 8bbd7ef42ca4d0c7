//! Exact checks of the BV-algebra axioms on a homology basis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HomologyClass, HomologyOp, HomologyTable};
use crate::bv::random_chain;
use crate::error::{Error, Result};
use crate::hochschild::hochschild_differential;
use crate::operad::OperadElement;
use crate::report::{CheckResult, VerificationReport, Witness};

/// Boundary perturbations tried by [`verify_bv_on_homology`].
pub const DEFAULT_PROBES: usize = 20;

use HomologyOp::{Bracket, Bullet, ConnesB};

/// [`verify_bv_on_homology_with`] with [`DEFAULT_PROBES`] probes and seed 0.
pub fn verify_bv_on_homology(table: &HomologyTable<'_>) -> Result<VerificationReport> {
    verify_bv_on_homology_with(table, DEFAULT_PROBES, 0)
}

struct Ctx<'t, 'a> {
    table: &'t HomologyTable<'a>,
    truncated: u64,
}

impl Ctx<'_, '_> {
    fn op(&self, op: HomologyOp, classes: &[&HomologyClass]) -> Result<HomologyClass> {
        let owned: Vec<HomologyClass> = classes.iter().map(|c| (*c).clone()).collect();
        self.table.induced_op(op, &owned)
    }

    /// Records `lhs == rhs`; instances leaving the table are counted instead.
    fn check(
        &mut self,
        check: &mut CheckResult,
        instance: impl FnOnce() -> String,
        eval: impl FnOnce(&Self) -> Result<(HomologyClass, HomologyClass)>,
    ) -> Result<()> {
        match eval(self) {
            Ok((lhs, rhs)) => {
                check.main().record(lhs == rhs, || Witness {
                    instance: instance(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                });
                Ok(())
            }
            Err(Error::Truncation { .. }) => {
                self.truncated += 1;
                Ok(())
            }
            Err(e) => Err(e),
        }
    }
}

fn name(c: &HomologyClass) -> String {
    c.to_string()
}

/// Checks graded commutativity and associativity of the cup product,
/// antisymmetry, Leibniz and Jacobi for the bracket, `B² = 0` and the BV
/// relation `B(xy) = B(x)y + (-1)^{|x|} x B(y) + (-1)^{|x|} [x, y]` on every
/// pair or triple of basis classes whose results stay inside the table, and
/// runs `probes` seeded well-definedness probes: representatives perturbed by
/// random boundaries must give the same induced classes.
pub fn verify_bv_on_homology_with(table: &HomologyTable<'_>, probes: usize, seed: u64) -> Result<VerificationReport> {
    let spec = table.spec();
    let mut report = VerificationReport::new("homology BV axioms", spec.name());
    report.seed = Some(seed);
    let basis = table.basis_classes();
    let mut ctx = Ctx { table, truncated: 0 };

    let mut commutative = CheckResult::single("graded commutativity of the cup product");
    let mut associative = CheckResult::single("associativity of the cup product");
    let mut antisymmetric = CheckResult::single("graded antisymmetry of the bracket");
    let mut leibniz = CheckResult::single("Leibniz rule for the bracket");
    let mut jacobi = CheckResult::single("graded Jacobi identity");
    let mut b_square = CheckResult::single("B squares to zero on homology");
    let mut bv = CheckResult::single("BV relation");

    for x in &basis {
        let dx = x.degree();
        ctx.check(
            &mut b_square,
            || name(x),
            |c| Ok((c.op(ConnesB, &[&c.op(ConnesB, &[x])?])?, HomologyClass::zero(0, 0, 0))),
        )?;
        for y in &basis {
            let dy = y.degree();
            let pair = || format!("x = {}, y = {}", name(x), name(y));
            ctx.check(&mut commutative, pair, |c| {
                Ok((c.op(Bullet, &[x, y])?, c.op(Bullet, &[y, x])?.signed(dx * dy)))
            })?;
            ctx.check(&mut antisymmetric, pair, |c| {
                Ok((c.op(Bracket, &[x, y])?, c.op(Bracket, &[y, x])?.signed((dx + 1) * (dy + 1) + 1)))
            })?;
            ctx.check(&mut bv, pair, |c| {
                let lhs = c.op(ConnesB, &[&c.op(Bullet, &[x, y])?])?;
                let rhs = c
                    .op(Bullet, &[&c.op(ConnesB, &[x])?, y])?
                    .add(&c.op(Bullet, &[x, &c.op(ConnesB, &[y])?])?.signed(dx))?
                    .add(&c.op(Bracket, &[x, y])?.signed(dx))?;
                Ok((lhs, rhs))
            })?;
            for z in &basis {
                let triple = || format!("x = {}, y = {}, z = {}", name(x), name(y), name(z));
                ctx.check(&mut associative, triple, |c| {
                    Ok((c.op(Bullet, &[&c.op(Bullet, &[x, y])?, z])?, c.op(Bullet, &[x, &c.op(Bullet, &[y, z])?])?))
                })?;
                ctx.check(&mut leibniz, triple, |c| {
                    let lhs = c.op(Bracket, &[x, &c.op(Bullet, &[y, z])?])?;
                    let rhs = c
                        .op(Bullet, &[&c.op(Bracket, &[x, y])?, z])?
                        .add(&c.op(Bullet, &[y, &c.op(Bracket, &[x, z])?])?.signed((dx + 1) * dy))?;
                    Ok((lhs, rhs))
                })?;
                ctx.check(&mut jacobi, triple, |c| {
                    let lhs = c.op(Bracket, &[x, &c.op(Bracket, &[y, z])?])?;
                    let rhs = c
                        .op(Bracket, &[&c.op(Bracket, &[x, y])?, z])?
                        .add(&c.op(Bracket, &[y, &c.op(Bracket, &[x, z])?])?.signed((dx + 1) * (dy + 1)))?;
                    Ok((lhs, rhs))
                })?;
            }
        }
    }
    for check in [commutative, associative, antisymmetric, leibniz, jacobi, b_square, bv] {
        report.push(check);
    }
    report.push(well_definedness(table, &basis, probes, seed)?);
    report.note(format!(
        "{} basis classes in arities below {}; {} instances left the table and were not evaluated",
        basis.len(),
        table.cap(),
        ctx.truncated
    ));
    Ok(report)
}

/// Perturbs representatives by random boundaries and compares induced classes.
fn well_definedness(
    table: &HomologyTable<'_>,
    basis: &[HomologyClass],
    probes: usize,
    seed: u64,
) -> Result<CheckResult> {
    let spec = table.spec();
    let mut check = CheckResult::single("induced operations are independent of representatives");
    if basis.is_empty() {
        return Ok(check);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perturb = |c: &HomologyClass, rng: &mut ChaCha8Rng| -> Result<OperadElement> {
        let mut rep = table.representative(c);
        if let Some(src) = c.arity.checked_sub(1).and_then(|s| table.complex().block(s, c.grading)) {
            let w = random_chain(src, rng);
            rep += &hochschild_differential(spec, &w)?;
        }
        Ok(rep)
    };
    let mut done = 0;
    let mut attempts = 0;
    while done < probes && attempts < probes * 50 {
        attempts += 1;
        let op = [Bullet, Bracket, ConnesB][rng.gen_range(0..3)];
        let classes: Vec<HomologyClass> =
            (0..op.operands()).map(|_| basis[rng.gen_range(0..basis.len())].clone()).collect();
        let expected = match table.induced_op(op, &classes) {
            Err(Error::Truncation { .. }) => continue,
            other => other?,
        };
        let reps = classes.iter().map(|c| perturb(c, &mut rng)).collect::<Result<Vec<_>>>()?;
        let got = table.class_of_result(op, &classes, &reps)?;
        done += 1;
        check.main().record(got == expected, || Witness {
            instance: format!(
                "{op:?} of {} with perturbed representatives",
                classes.iter().map(name).collect::<Vec<_>>().join(", ")
            ),
            lhs: got.to_string(),
            rhs: expected.to_string(),
        });
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defs::{builtin_assoc, builtin_frobenius_end, FrobeniusSpec};
    use crate::hochschild::Flavor;
    use crate::homology::compute_hh;
    use crate::operad::Ring;

    #[test]
    fn assoc_passes() {
        let spec = builtin_assoc(6).unwrap();
        let table = compute_hh(&spec, 6, Flavor::Normalized, Ring::Rationals).unwrap();
        let report = verify_bv_on_homology(&table).unwrap();
        assert!(report.passed(), "{}", report.to_text());
    }

    #[test]
    fn dual1_passes() {
        let spec = builtin_frobenius_end(&FrobeniusSpec::dual1(), 4).unwrap();
        let table = compute_hh(&spec, 4, Flavor::Normalized, Ring::Rationals).unwrap();
        let report = verify_bv_on_homology(&table).unwrap();
        assert!(report.passed(), "{}", report.to_text());
    }
}
