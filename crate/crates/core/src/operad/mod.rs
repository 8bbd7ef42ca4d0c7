//! Graded non-symmetric operads given by finite basis and table data, with a
//! multiplication, a unit and an optional cyclic structure.

mod element;
mod spec;
mod validate;

pub use element::{sign, OperadElement};
pub use spec::{Combination, ComposeKey, Generator, OperadSpec, Ring};
pub use validate::{validate_cyclic, validate_operad, ValidatedSpec};
