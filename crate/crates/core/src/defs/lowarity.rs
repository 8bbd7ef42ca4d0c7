use crate::error::{Error, Result};
use crate::operad::ValidatedSpec;

use super::format::parse_operad_file;

/// Arity cap of the shipped framed-disks tables.
pub const BV_LOWARITY_CAP: usize = 3;

/// Generated by `tools/bv_lowarity.py`.
const TABLES: &str = include_str!("../../data/bv_lowarity.json");

/// Low-arity tables of the framed little 2-disks homology operad (the BV
/// operad), arities 0 to 3 with ranks 1, 2, 8, 48.
///
/// The basis of arity `k` is the products of left-normed Lie words in the
/// letters `x_i` and `Dx_i`, for example `[x1,Dx3].x2`. The tables are
/// derived data: they are served only after both validators pass, and the
/// built-in is reported unavailable otherwise.
pub fn builtin_bv_lowarity() -> Result<ValidatedSpec> {
    let spec = parse_operad_file(TABLES).map_err(|e| Error::Unavailable(format!("bv-lowarity tables: {e}")))?;
    ValidatedSpec::new(spec).map_err(|e| Error::Unavailable(format!("bv-lowarity: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_load_with_the_expected_ranks() {
        let spec = builtin_bv_lowarity().unwrap().into_inner();
        let ranks: Vec<usize> = (0..=BV_LOWARITY_CAP).map(|k| spec.rank(k)).collect();
        assert_eq!(ranks, [1, 2, 8, 48]);
        assert_eq!(spec.metadata()["provenance"], "derived data, validated");
        assert_eq!(spec.display(spec.multiplication()), "x1.x2");
    }
}
