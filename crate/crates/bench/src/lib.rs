//! Criterion benchmarks for qd-core live in `benches/`.
