//! Benchmark-only crate; see `benches/reur.rs`.
