//! Built-in operads and the operad-file format.

mod assoc;
mod format;
mod frobenius;
mod lowarity;

pub use assoc::builtin_assoc;
pub use format::{parse_operad_file, parse_operad_file_with, serialize_operad, ParseOptions};
pub use frobenius::{
    builtin_frobenius_end, builtin_frobenius_end_with_limit, endomorphism_generator_name, max_rank_from_env,
    FrobeniusSpec, DEFAULT_MAX_RANK,
};
pub use lowarity::{builtin_bv_lowarity, BV_LOWARITY_CAP};

use crate::error::{Error, Result};
use crate::operad::{OperadSpec, ValidatedSpec};

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] =
    &["assoc", "frobenius:ground", "frobenius:dual1", "frobenius:ext2", "frobenius:cp2", "bv-lowarity"];

/// Constructs a built-in by name, unvalidated.
///
/// `bv-lowarity` ships as fixed tables and ignores `cap`; its arity cap is
/// always [`BV_LOWARITY_CAP`].
pub fn builtin_unvalidated(name: &str, cap: usize) -> Result<OperadSpec> {
    if name == "assoc" {
        return builtin_assoc(cap);
    }
    if name == "bv-lowarity" {
        return builtin_bv_lowarity().map(ValidatedSpec::into_inner);
    }
    if let Some(alg) = name.strip_prefix("frobenius:") {
        let frob = FrobeniusSpec::by_name(alg).ok_or_else(|| unknown(name))?;
        return builtin_frobenius_end(&frob, cap);
    }
    Err(unknown(name))
}

/// Constructs and validates a built-in by name.
///
/// A built-in that fails its validators is reported as unavailable rather
/// than served.
pub fn builtin(name: &str, cap: usize) -> Result<ValidatedSpec> {
    let spec = builtin_unvalidated(name, cap)?;
    ValidatedSpec::new(spec).map_err(|e| Error::Unavailable(format!("{name}: {e}")))
}

fn unknown(name: &str) -> Error {
    Error::InvalidInput(format!("unknown built-in {name:?}; known: {}", BUILTIN_NAMES.join(", ")))
}
