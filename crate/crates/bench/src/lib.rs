//! Criterion benchmarks for the toric Nash blowup pipeline; see `benches/pipeline.rs`.
