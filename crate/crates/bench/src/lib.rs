//! Criterion benchmarks for `spencer-core` live under `benches/`.
