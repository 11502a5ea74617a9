use serde::{Deserialize, Serialize};

use crate::algorithms::{AlgorithmOutput, ExecutionPath};
use crate::error::{BaxError, Result};
use crate::metrics::{jaccard_distance, jaccard_points};

/// One algorithm run on one posterior function draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleDraw {
    pub sample_id: usize,
    pub path: ExecutionPath,
    pub output: AlgorithmOutput,
}

/// The shared set of posterior samples used for every candidate in one iteration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleBundle {
    pub draws: Vec<BundleDraw>,
}

impl SampleBundle {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn outputs(&self) -> Vec<&AlgorithmOutput> {
        self.draws.iter().map(|d| &d.output).collect()
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.draws.is_empty() {
            return Err(BaxError::input("sample bundle is empty"));
        }
        Ok(())
    }
}

/// Distance between two algorithm outputs of the same kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum OutputDistance {
    /// Jaccard distance between top-k element sets.
    JaccardOnSets,
    /// Jaccard distance between the directed edge sets of two paths.
    JaccardOnEdgeSets,
    /// Euclidean distance on `(x*, f*)`, each coordinate divided by its scale.
    EuclideanOnOptimum { scales: Vec<f64> },
}

impl OutputDistance {
    /// Euclidean distance with per-coordinate scales set to the bundle's sample
    /// standard deviation (coordinates with no spread get scale 1).
    pub fn euclidean_for(outputs: &[&AlgorithmOutput]) -> Result<Self> {
        let rows: Vec<Vec<f64>> = outputs
            .iter()
            .map(|o| match o {
                AlgorithmOutput::LocalOpt { x_star, f_star } => {
                    let mut v = x_star.clone();
                    v.push(*f_star);
                    Ok(v)
                }
                _ => Err(BaxError::input(
                    "euclidean output distance needs local-optimum outputs",
                )),
            })
            .collect::<Result<_>>()?;
        let first = rows
            .first()
            .ok_or_else(|| BaxError::input("no outputs to scale"))?;
        let n = rows.len() as f64;
        let mut scales = Vec::with_capacity(first.len());
        for c in 0..first.len() {
            let mean = rows.iter().map(|r| r[c]).sum::<f64>() / n;
            let var = if rows.len() > 1 {
                rows.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            let sd = var.sqrt();
            scales.push(if sd > 0.0 && sd.is_finite() { sd } else { 1.0 });
        }
        Ok(OutputDistance::EuclideanOnOptimum { scales })
    }

    /// The natural distance for an output kind; local optima are scaled from `outputs`.
    pub fn for_outputs(outputs: &[&AlgorithmOutput]) -> Result<Self> {
        match outputs.first() {
            Some(AlgorithmOutput::TopK { .. }) => Ok(OutputDistance::JaccardOnSets),
            Some(AlgorithmOutput::GraphPath { .. }) => Ok(OutputDistance::JaccardOnEdgeSets),
            Some(AlgorithmOutput::LocalOpt { .. }) => Self::euclidean_for(outputs),
            None => Err(BaxError::input("no outputs")),
        }
    }

    pub fn distance(&self, a: &AlgorithmOutput, b: &AlgorithmOutput) -> Result<f64> {
        match (self, a, b) {
            (
                OutputDistance::JaccardOnSets,
                AlgorithmOutput::TopK { elements: ea, .. },
                AlgorithmOutput::TopK { elements: eb, .. },
            ) => Ok(jaccard_points(ea, eb)),
            (
                OutputDistance::JaccardOnEdgeSets,
                AlgorithmOutput::GraphPath { vertices: va, .. },
                AlgorithmOutput::GraphPath { vertices: vb, .. },
            ) => {
                let edges = |v: &[usize]| v.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>();
                Ok(jaccard_distance(edges(va), edges(vb)))
            }
            (
                OutputDistance::EuclideanOnOptimum { scales },
                AlgorithmOutput::LocalOpt {
                    x_star: xa,
                    f_star: fa,
                },
                AlgorithmOutput::LocalOpt {
                    x_star: xb,
                    f_star: fb,
                },
            ) => {
                if xa.len() != xb.len() || scales.len() != xa.len() + 1 {
                    return Err(BaxError::input(
                        "local optima and scales disagree in dimension",
                    ));
                }
                let mut s = 0.0;
                for ((u, v), sc) in xa.iter().zip(xb).zip(scales) {
                    s += ((u - v) / sc).powi(2);
                }
                s += ((fa - fb) / scales[xa.len()]).powi(2);
                Ok(s.sqrt())
            }
            _ => Err(BaxError::input(
                "output distance does not match the output kinds being compared",
            )),
        }
    }

    pub(crate) fn matrix(&self, outputs: &[&AlgorithmOutput]) -> Result<Vec<Vec<f64>>> {
        let n = outputs.len();
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = self.distance(outputs[i], outputs[j])?;
                d[i][j] = v;
                d[j][i] = v;
            }
        }
        Ok(d)
    }
}

/// Ball-size and Monte Carlo settings for the output-clustering acquisition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbcPolicy {
    #[serde(default = "default_min_ball")]
    pub min_ball_size: usize,
    #[serde(default = "default_mc_draws")]
    pub entropy_mc_draws: usize,
}

fn default_min_ball() -> usize {
    30
}

fn default_mc_draws() -> usize {
    512
}

impl Default for AbcPolicy {
    fn default() -> Self {
        AbcPolicy {
            min_ball_size: default_min_ball(),
            entropy_mc_draws: default_mc_draws(),
        }
    }
}

fn delta_from_matrix(d: &[Vec<f64>], min_ball_size: usize) -> Result<f64> {
    let n = d.len();
    if min_ball_size == 0 {
        return Ok(0.0);
    }
    if n < min_ball_size + 1 {
        return Err(BaxError::config(format!(
            "cannot give every one of {n} outputs {min_ball_size} neighbours"
        )));
    }
    let mut delta: f64 = 0.0;
    for (j, row) in d.iter().enumerate() {
        let mut others: Vec<f64> = row
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, v)| *v)
            .collect();
        others.sort_by(f64::total_cmp);
        delta = delta.max(others[min_ball_size - 1]);
    }
    Ok(delta)
}

/// Smallest observed pairwise distance at which every output has at least
/// `min_ball_size` other outputs within it.
pub fn select_delta(
    outputs: &[&AlgorithmOutput],
    distance: &OutputDistance,
    min_ball_size: usize,
) -> Result<f64> {
    delta_from_matrix(&distance.matrix(outputs)?, min_ball_size)
}

/// For each draw, the indices of all draws (itself included) whose outputs lie within
/// the selected radius. The radius guarantees at least `policy.min_ball_size` members.
pub(crate) fn output_balls(
    bundle: &SampleBundle,
    distance: &OutputDistance,
    policy: &AbcPolicy,
) -> Result<Vec<Vec<usize>>> {
    let n = bundle.len();
    if policy.min_ball_size == 0 || policy.min_ball_size > n {
        return Err(BaxError::config(format!(
            "minimum ball size {} is not achievable with {n} posterior samples",
            policy.min_ball_size
        )));
    }
    let d = distance.matrix(&bundle.outputs())?;
    let delta = delta_from_matrix(&d, policy.min_ball_size - 1)?;
    Ok(d.iter()
        .map(|row| (0..n).filter(|&k| row[k] <= delta).collect())
        .collect())
}
