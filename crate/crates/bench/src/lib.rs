//! Criterion benchmarks for submax-core live in `benches/`.
