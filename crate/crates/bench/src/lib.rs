//! Criterion benchmarks for `ophh-core`; see `benches/engine.rs`.
//!
//! Run with `cargo bench -p ophh-bench`.
