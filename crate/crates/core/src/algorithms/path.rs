use serde::{Deserialize, Serialize};

/// Ordered `(input, value)` pairs an algorithm queried while running.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExecutionPath {
    pub steps: Vec<(Vec<f64>, f64)>,
}

impl ExecutionPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub(crate) fn record(&mut self, z: &[f64], value: f64) {
        self.steps.push((z.to_vec(), value));
    }
}

/// What an algorithm returns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AlgorithmOutput {
    /// Highest-valued elements, best first, with their values.
    TopK {
        elements: Vec<Vec<f64>>,
        values: Vec<f64>,
    },
    /// A walk from source to destination; one midpoint and cost per edge.
    GraphPath {
        vertices: Vec<usize>,
        positions: Vec<[f64; 2]>,
        edge_points: Vec<Vec<f64>>,
        edge_costs: Vec<f64>,
    },
    LocalOpt {
        x_star: Vec<f64>,
        f_star: f64,
    },
}

/// The function values the output pins down exactly, as `(input, value)` pairs.
pub fn extract_subsequence_values(output: &AlgorithmOutput) -> Vec<(Vec<f64>, f64)> {
    match output {
        AlgorithmOutput::TopK { elements, values } => elements
            .iter()
            .cloned()
            .zip(values.iter().copied())
            .collect(),
        AlgorithmOutput::GraphPath {
            edge_points,
            edge_costs,
            ..
        } => edge_points
            .iter()
            .cloned()
            .zip(edge_costs.iter().copied())
            .collect(),
        AlgorithmOutput::LocalOpt { x_star, f_star } => vec![(x_star.clone(), *f_star)],
    }
}
