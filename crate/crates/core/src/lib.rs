//! Hochschild homology of graded cyclic multiplicative operads, in exact
//! arithmetic.
//!
//! An operad is given by finite data up to an arity cap ([`OperadSpec`]).
//! From it this crate builds the Hochschild complex, its homology over the
//! integers or the rationals, the cup product, the bracket and Connes'
//! boundary, and checks the BV-algebra identities at chain and homology level.

pub mod bv;
pub mod defs;
pub mod error;
pub mod hochschild;
pub mod homology;
pub mod linalg;
pub mod operad;
pub mod report;

pub use bv::{verify_identity_suite, ChainPair};
pub use defs::{builtin, builtin_assoc, builtin_frobenius_end, parse_operad_file, serialize_operad, FrobeniusSpec};
pub use error::{Error, Result};
pub use hochschild::{build_complex, BigradedComplex, ChainBlock, Flavor};
pub use homology::{compute_hh, verify_bv_on_homology, HomologyClass, HomologyEntry, HomologyOp, HomologyTable};
pub use operad::{
    validate_cyclic, validate_operad, ComposeKey, Generator, OperadElement, OperadSpec, Ring, ValidatedSpec,
};
pub use report::{CheckResult, ReadingOutcome, VerificationReport, Witness};
