//! Benchmarks for `gmetric`; see `benches/core.rs`.
