use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::path::{AlgorithmOutput, ExecutionPath};
use crate::domain::BoxDomain;
use crate::error::{BaxError, Result};

/// Mutation-only evolution strategy settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ESConfig {
    pub population: usize,
    pub generations: usize,
    pub proposal_std: f64,
    /// Fraction of each generation kept as parents for the next.
    pub elite_frac: f64,
    pub minimize: bool,
}

impl ESConfig {
    /// Population 15, a third kept, proposal std 5% of the shortest side and
    /// 14 generations (211 queries in total).
    pub fn default_for(domain: &BoxDomain, minimize: bool) -> Self {
        ESConfig {
            population: 15,
            generations: 14,
            proposal_std: 0.05 * domain.shortest_side(),
            elite_frac: 0.33,
            minimize,
        }
    }

    pub fn survivors(&self) -> usize {
        (self.elite_frac * self.population as f64).ceil() as usize
    }

    /// Total number of function queries one run makes.
    pub fn total_queries(&self) -> usize {
        1 + self.population * self.generations
    }

    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(BaxError::input("ES population must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.elite_frac) || self.survivors() == 0 {
            return Err(BaxError::input(format!(
                "elite fraction {} must lie in [0, 1] and keep at least one member",
                self.elite_frac
            )));
        }
        if !(self.proposal_std > 0.0) || !self.proposal_std.is_finite() {
            return Err(BaxError::input("ES proposal std must be positive"));
        }
        Ok(())
    }

    fn better(&self, a: f64, b: f64) -> bool {
        if self.minimize {
            a < b
        } else {
            a > b
        }
    }
}

/// Runs the evolution strategy and returns the best point queried over all generations.
///
/// Every member starts at one uniform draw from `domain`. Each generation
/// mutates all `p` members with isotropic normal noise (clipped to the box),
/// queries them, and keeps the best `ceil(e * p)`; the survivors are cycled to
/// refill the population for the next generation. The random stream depends
/// only on `seed`, never on function values.
pub fn run_evolution_strategy<F>(
    config: &ESConfig,
    domain: &BoxDomain,
    mut f: F,
    seed: u64,
) -> Result<(ExecutionPath, AlgorithmOutput)>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    config.validate()?;
    domain.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise =
        Normal::new(0.0, config.proposal_std).map_err(|e| BaxError::input(e.to_string()))?;
    let mut path = ExecutionPath::default();

    let start = domain.sample_uniform(&mut rng);
    let v0 = f(&start)?;
    if v0.is_nan() {
        return Err(BaxError::Contract("evolution strategy received NaN".into()));
    }
    path.record(&start, v0);
    let mut best = (start.clone(), v0);
    let mut population = vec![start; config.population];
    let keep = config.survivors();

    for _ in 0..config.generations {
        let mut scored = Vec::with_capacity(config.population);
        for member in &population {
            let mut child: Vec<f64> = member.iter().map(|c| c + noise.sample(&mut rng)).collect();
            domain.clip(&mut child);
            let v = f(&child)?;
            if v.is_nan() {
                return Err(BaxError::Contract("evolution strategy received NaN".into()));
            }
            path.record(&child, v);
            if config.better(v, best.1) {
                best = (child.clone(), v);
            }
            scored.push((child, v));
        }
        // stable: equal values keep query order
        if config.minimize {
            scored.sort_by(|a, b| a.1.total_cmp(&b.1));
        } else {
            scored.sort_by(|a, b| b.1.total_cmp(&a.1));
        }
        scored.truncate(keep);
        population = (0..config.population)
            .map(|i| scored[i % scored.len()].0.clone())
            .collect();
    }

    Ok((
        path,
        AlgorithmOutput::LocalOpt {
            x_star: best.0,
            f_star: best.1,
        },
    ))
}
