//! Property-computing algorithms with instrumented execution paths.
//!
//! Every algorithm takes the black-box function as a closure and records each
//! query it makes, in order, into an [`ExecutionPath`].

mod dijkstra;
mod es;
mod graph;
mod path;
mod topk;

pub use dijkstra::run_dijkstra;
pub use es::{run_evolution_strategy, ESConfig};
pub use graph::{load_graph, save_graph, Edge, Graph, Vertex, EDGE_LIST_HEADER};
pub use path::{extract_subsequence_values, AlgorithmOutput, ExecutionPath};
pub use topk::run_topk;
