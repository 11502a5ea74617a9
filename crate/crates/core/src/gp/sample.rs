use std::collections::HashMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::linalg::GrowingCholesky;
use super::posterior::{point_key, Evidence, GPModel, PointKey, Posterior, ResolvedPoint};
use crate::error::Result;

/// One posterior function draw, realized point by point.
///
/// Each new query is drawn from the exact conditional given the evidence and
/// every value realized so far, so any finite set of queried values has the
/// joint law of the GP posterior. Not thread-safe by itself: one sample is
/// advanced by one execution at a time.
#[derive(Debug, Clone)]
pub struct LazyFunctionSample {
    posterior: Arc<Posterior>,
    realized: Vec<(Vec<f64>, f64)>,
    lookup: HashMap<PointKey, usize>,
    points: Vec<ResolvedPoint>,
    factor: GrowingCholesky,
    innovations: Vec<f64>,
    rng: ChaCha8Rng,
    cross: Vec<f64>,
}

/// Draws a fresh lazy sample from `p(f | evidence)`.
pub fn sample_function(
    model: &GPModel,
    evidence: &Evidence,
    seed: u64,
) -> Result<LazyFunctionSample> {
    Ok(LazyFunctionSample::from_posterior(
        Arc::new(Posterior::new(model, evidence)?),
        seed,
    ))
}

impl LazyFunctionSample {
    /// Shares one factorized posterior between many samples.
    pub fn from_posterior(posterior: Arc<Posterior>, seed: u64) -> Self {
        LazyFunctionSample {
            posterior,
            realized: Vec::new(),
            lookup: HashMap::new(),
            points: Vec::new(),
            factor: GrowingCholesky::new(),
            innovations: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            cross: Vec::new(),
        }
    }

    pub fn realized(&self) -> &[(Vec<f64>, f64)] {
        &self.realized
    }

    pub fn posterior(&self) -> &Posterior {
        &self.posterior
    }

    /// Value of the sampled function at `x`. Repeated inputs return the stored value.
    pub fn query(&mut self, x: &[f64]) -> Result<f64> {
        let key = point_key(x);
        if let Some(&i) = self.lookup.get(&key) {
            return Ok(self.realized[i].1);
        }
        let p = self.posterior.resolve(x)?;
        self.cross.clear();
        for q in &self.points {
            self.cross.push(self.posterior.covariance(q, &p));
        }
        let diag = self.posterior.covariance(&p, &p);
        let model = self.posterior.model();
        self.factor.push(
            &self.cross,
            diag,
            self.posterior.jitter(),
            model.max_jitter().max(self.posterior.jitter()),
        )?;
        let row = self.factor.row(self.points.len());
        let eps: f64 = StandardNormal.sample(&mut self.rng);
        let mut value = p.mean;
        for (l, e) in row.iter().zip(&self.innovations) {
            value += l * e;
        }
        value += row[row.len() - 1] * eps;

        self.innovations.push(eps);
        self.lookup.insert(key, self.realized.len());
        self.realized.push((x.to_vec(), value));
        self.points.push(p);
        Ok(value)
    }
}

/// Free-function form of [`LazyFunctionSample::query`].
pub fn sample_query(sample: &mut LazyFunctionSample, x: &[f64]) -> Result<f64> {
    sample.query(x)
}
