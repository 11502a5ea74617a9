//! Benchmark objectives, grid-graph construction and the positive-cost transform.

mod benchmarks;
mod grid;
mod transform;

pub use benchmarks::{eval_benchmark, BenchmarkFn};
pub use grid::{grid_edge_count, make_grid_graph};
pub use transform::{inverse_softplus, softplus, wrap_positive_cost, PositivityTransform};
