use std::collections::HashMap;
use std::sync::Arc;

use crate::algorithms::{
    run_dijkstra, run_evolution_strategy, run_topk, AlgorithmOutput, ESConfig, ExecutionPath, Graph,
};
use crate::domain::BoxDomain;
use crate::error::{BaxError, Result};
use crate::gp::point_key;
use crate::problems::softplus;

/// A property-computing algorithm that can be run on any queryable function.
///
/// The function passed to [`Algorithm::execute`] is always in the modeling
/// space; recorded paths and outputs carry modeling-space values so they can be
/// used directly as exact GP evidence.
pub trait Algorithm: Send + Sync {
    fn execute(
        &self,
        f: &mut dyn FnMut(&[f64]) -> Result<f64>,
        seed: u64,
    ) -> Result<(ExecutionPath, AlgorithmOutput)>;

    /// Every input the algorithm could ever query, when that set is finite.
    fn finite_domain(&self) -> Option<Vec<Vec<f64>>> {
        None
    }
}

/// Exhaustive top-k scan over a fixed element list.
#[derive(Debug, Clone)]
pub struct TopKAlgorithm {
    pub elements: Vec<Vec<f64>>,
    pub k: usize,
}

impl Algorithm for TopKAlgorithm {
    fn execute(
        &self,
        f: &mut dyn FnMut(&[f64]) -> Result<f64>,
        _seed: u64,
    ) -> Result<(ExecutionPath, AlgorithmOutput)> {
        run_topk(&self.elements, self.k, f)
    }

    fn finite_domain(&self) -> Option<Vec<Vec<f64>>> {
        Some(self.elements.clone())
    }
}

/// Dijkstra on edge costs `softplus(f(midpoint))`.
#[derive(Debug, Clone)]
pub struct ShortestPathAlgorithm {
    pub graph: Arc<Graph>,
    pub source: usize,
    pub dest: usize,
}

impl Algorithm for ShortestPathAlgorithm {
    fn execute(
        &self,
        f: &mut dyn FnMut(&[f64]) -> Result<f64>,
        _seed: u64,
    ) -> Result<(ExecutionPath, AlgorithmOutput)> {
        let mut seen = HashMap::new();
        let mut raw = Vec::new();
        let (mut path, mut output) = run_dijkstra(&self.graph, self.source, self.dest, |m| {
            let g = f(m)?;
            if !g.is_finite() {
                return Err(BaxError::Contract(format!(
                    "edge cost model value {g} is not finite"
                )));
            }
            seen.insert(point_key(m), g);
            raw.push(g);
            Ok(softplus(g))
        })?;
        for (step, g) in path.steps.iter_mut().zip(raw) {
            step.1 = g;
        }
        if let AlgorithmOutput::GraphPath {
            edge_points,
            edge_costs,
            ..
        } = &mut output
        {
            for (z, c) in edge_points.iter().zip(edge_costs.iter_mut()) {
                *c = seen[&point_key(z)];
            }
        }
        Ok((path, output))
    }

    fn finite_domain(&self) -> Option<Vec<Vec<f64>>> {
        Some(self.graph.distinct_midpoints())
    }
}

/// Evolution strategy over a box; each run uses its own seed.
#[derive(Debug, Clone)]
pub struct EvolutionAlgorithm {
    pub config: ESConfig,
    pub domain: BoxDomain,
}

impl Algorithm for EvolutionAlgorithm {
    fn execute(
        &self,
        f: &mut dyn FnMut(&[f64]) -> Result<f64>,
        seed: u64,
    ) -> Result<(ExecutionPath, AlgorithmOutput)> {
        run_evolution_strategy(&self.config, &self.domain, f, seed)
    }
}
