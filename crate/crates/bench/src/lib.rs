//! Benchmarks live in `benches/engine.rs`.
