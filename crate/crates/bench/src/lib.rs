//! Criterion micro-benchmarks for the solvers live in `benches/`. For the
//! paper-style scaling curves use `meval bench` instead, which emits CSV.
