//! Error metrics for inferred algorithm outputs.

mod area;

use std::collections::HashSet;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::algorithms::AlgorithmOutput;
use crate::error::{BaxError, Result};
use crate::gp::point_key;

pub use area::{area_between, shoelace_area};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub name: String,
    pub value: f64,
    pub iteration: usize,
}

/// `1 - |a ∩ b| / |a ∪ b|`; two empty sets are at distance 0.
pub fn jaccard_distance<T, A, B>(a: A, b: B) -> f64
where
    T: Eq + Hash,
    A: IntoIterator<Item = T>,
    B: IntoIterator<Item = T>,
{
    let a: HashSet<T> = a.into_iter().collect();
    let b: HashSet<T> = b.into_iter().collect();
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    let inter = a.intersection(&b).count();
    1.0 - inter as f64 / union as f64
}

/// Jaccard distance between two sets of input vectors, compared bitwise.
pub fn jaccard_points(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    jaccard_distance(
        a.iter().map(|x| point_key(x)),
        b.iter().map(|x| point_key(x)),
    )
}

/// Area enclosed between two graph paths divided by `normalizer`.
pub fn path_area_error(
    inferred: &AlgorithmOutput,
    truth: &AlgorithmOutput,
    normalizer: f64,
) -> Result<f64> {
    let positions = |o: &AlgorithmOutput| match o {
        AlgorithmOutput::GraphPath { positions, .. } => Ok(positions.clone()),
        _ => Err(BaxError::input(
            "area error is defined for graph paths only",
        )),
    };
    if !(normalizer > 0.0) || !normalizer.is_finite() {
        return Err(BaxError::input(format!(
            "normalizer must be positive, got {normalizer}"
        )));
    }
    let a = positions(inferred)?;
    let b = positions(truth)?;
    Ok(area_between(&a, &b)? / normalizer)
}

/// Objective gap between an estimate and the optimum, oriented so that smaller is better.
pub fn simple_regret(f_at_estimate: f64, f_at_optimum: f64, minimize: bool) -> f64 {
    if minimize {
        f_at_estimate - f_at_optimum
    } else {
        f_at_optimum - f_at_estimate
    }
}
