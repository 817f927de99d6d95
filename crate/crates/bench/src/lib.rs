//! Criterion benchmarks for pimkit; see `benches/`.
