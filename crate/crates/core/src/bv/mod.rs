//! The cup product, bar-circ, bracket and Connes' boundary on Hochschild
//! chains, and the exact chain-level identity suite for the BV structure.

mod ops;
mod suite;

pub use ops::{
    bar_circ, bracket, bullet, connes_b, connes_b_literal, connes_b_normalized, h_homotopy, h_jp, sigma, z_term,
};
pub use suite::{random_chain, sample_pairs, verify_identity_suite, ChainPair};
