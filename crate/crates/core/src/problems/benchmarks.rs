use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::domain::BoxDomain;
use crate::error::{BaxError, Result};

const HARTMANN6_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const HARTMANN6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const HARTMANN6_B: [[f64; 6]; 4] = [
    [1312.0, 1696.0, 5569.0, 124.0, 8283.0, 5886.0],
    [2329.0, 4135.0, 8307.0, 3736.0, 1004.0, 9991.0],
    [2348.0, 1451.0, 3522.0, 2883.0, 3047.0, 6650.0],
    [4047.0, 8828.0, 8732.0, 5743.0, 1091.0, 381.0],
];

/// Benchmark objectives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum BenchmarkFn {
    /// `1e-2 * ((a - x2)^2 + b (x2 - x1^2)^2)` with `a = 1`, `b = 100`.
    /// `classical` switches the first term to `(a - x1)^2`.
    RosenbrockScaled {
        #[serde(default)]
        classical: bool,
    },
    Branin,
    Hartmann6,
    Ackley10,
    /// `sum_i 2 |x_i| sin(x_i)` on `[-10, 10]^d`.
    SkewedSin {
        dim: usize,
    },
}

impl BenchmarkFn {
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "rosenbrock" | "rosenbrock_scaled" => BenchmarkFn::RosenbrockScaled { classical: false },
            "rosenbrock_classical" => BenchmarkFn::RosenbrockScaled { classical: true },
            "branin" => BenchmarkFn::Branin,
            "hartmann6" => BenchmarkFn::Hartmann6,
            "ackley10" => BenchmarkFn::Ackley10,
            "skewed_sin" | "skewed_sin2" => BenchmarkFn::SkewedSin { dim: 2 },
            "skewed_sin1" => BenchmarkFn::SkewedSin { dim: 1 },
            other => {
                return Err(BaxError::input(format!(
                    "unknown benchmark `{other}`; expected one of rosenbrock, rosenbrock_classical, branin, hartmann6, ackley10, skewed_sin, skewed_sin1"
                )))
            }
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            BenchmarkFn::RosenbrockScaled { .. } | BenchmarkFn::Branin => 2,
            BenchmarkFn::Hartmann6 => 6,
            BenchmarkFn::Ackley10 => 10,
            BenchmarkFn::SkewedSin { dim } => *dim,
        }
    }

    pub fn domain(&self) -> BoxDomain {
        let bounds: Vec<(f64, f64)> = match self {
            BenchmarkFn::RosenbrockScaled { .. } => vec![(-2.0, 2.0), (-1.0, 4.0)],
            BenchmarkFn::Branin => vec![(-5.0, 10.0), (0.0, 15.0)],
            BenchmarkFn::Hartmann6 => vec![(0.0, 1.0); 6],
            BenchmarkFn::Ackley10 => vec![(-32.768, 32.768); 10],
            BenchmarkFn::SkewedSin { dim } => vec![(-10.0, 10.0); *dim],
        };
        BoxDomain::from_bounds(&bounds).expect("benchmark domains are valid")
    }

    /// Whether the benchmark is posed as a minimization problem.
    pub fn minimize(&self) -> bool {
        !matches!(self, BenchmarkFn::SkewedSin { .. })
    }

    /// Known global optimum value, where one exists on the domain.
    pub fn optimum_value(&self) -> Option<f64> {
        match self {
            BenchmarkFn::RosenbrockScaled { .. } | BenchmarkFn::Ackley10 => Some(0.0),
            BenchmarkFn::Branin => Some(0.397_887_357_729_738_2),
            BenchmarkFn::Hartmann6 => Some(-3.322_368_011_391_339),
            BenchmarkFn::SkewedSin { .. } => None,
        }
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            BenchmarkFn::RosenbrockScaled { classical } => {
                let (a, b) = (1.0, 100.0);
                let first = if *classical { a - x[0] } else { a - x[1] };
                1e-2 * (first * first + b * (x[1] - x[0] * x[0]).powi(2))
            }
            BenchmarkFn::Branin => {
                let b = 5.1 / (4.0 * PI * PI);
                let c = 5.0 / PI;
                let t = 1.0 / (8.0 * PI);
                (x[1] - b * x[0] * x[0] + c * x[0] - 6.0).powi(2)
                    + 10.0 * (1.0 - t) * x[0].cos()
                    + 10.0
            }
            BenchmarkFn::Hartmann6 => -HARTMANN6_ALPHA
                .iter()
                .zip(HARTMANN6_A.iter().zip(&HARTMANN6_B))
                .map(|(alpha, (a, b))| {
                    let inner: f64 = (0..6).map(|j| a[j] * (x[j] - b[j] * 1e-4).powi(2)).sum();
                    alpha * (-inner).exp()
                })
                .sum::<f64>(),
            BenchmarkFn::Ackley10 => {
                let n = x.len() as f64;
                let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
                let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
            }
            BenchmarkFn::SkewedSin { .. } => x.iter().map(|v| 2.0 * v.abs() * v.sin()).sum(),
        }
    }
}

pub fn eval_benchmark(f: &BenchmarkFn, x: &[f64]) -> Result<f64> {
    if x.len() != f.dim() {
        return Err(BaxError::input(format!(
            "benchmark expects dimension {}, got {}",
            f.dim(),
            x.len()
        )));
    }
    Ok(f.eval_unchecked(x))
}
