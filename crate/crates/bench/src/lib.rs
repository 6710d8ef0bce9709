//! Benchmark fixtures for srbkit. The benchmarks live in `benches/`.
