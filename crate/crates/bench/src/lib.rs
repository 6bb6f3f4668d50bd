//! Benchmarks of the core kernels; run with `cargo bench -p tame3-bench`.
