//! Criterion benchmarks for the constructions in `heffter-core`.
//!
//! Run with `cargo bench -p heffter-bench`.
