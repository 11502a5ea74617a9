use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::bundle::{output_balls, AbcPolicy, OutputDistance, SampleBundle};
use crate::algorithms::extract_subsequence_values;
use crate::domain::derive_seed;
use crate::error::{BaxError, Result};
use crate::gp::{Evidence, GPModel, NoiselessConditioner, Posterior, ResolvedPoint};

const LN_2PI_E: f64 = 2.837_877_066_409_345_5;

/// Half log of an observation variance, floored so noiseless models stay finite.
fn half_log_var(posterior: &Posterior, latent_var: f64) -> f64 {
    let v = latent_var + posterior.model().noise_variance;
    0.5 * v.max(posterior.jitter()).ln()
}

/// Posterior on the observed data, with each bundle draw layered on as exact evidence.
pub struct ConditionedBundle<'a> {
    posterior: &'a Posterior,
    conditioners: Vec<NoiselessConditioner<'a>>,
}

impl<'a> ConditionedBundle<'a> {
    /// Conditions each draw on its whole execution path.
    pub fn on_paths(posterior: &'a Posterior, bundle: &SampleBundle) -> Result<Self> {
        bundle.require_nonempty()?;
        let conditioners = bundle
            .draws
            .iter()
            .map(|d| {
                NoiselessConditioner::new(
                    posterior,
                    d.path.steps.iter().map(|(z, v)| (z.as_slice(), *v)),
                )
            })
            .collect::<Result<_>>()?;
        Ok(ConditionedBundle {
            posterior,
            conditioners,
        })
    }

    /// Conditions each draw only on the values its output pins down.
    pub fn on_subsequences(posterior: &'a Posterior, bundle: &SampleBundle) -> Result<Self> {
        bundle.require_nonempty()?;
        let conditioners = bundle
            .draws
            .iter()
            .map(|d| {
                let pairs = extract_subsequence_values(&d.output);
                NoiselessConditioner::new(posterior, pairs.iter().map(|(z, v)| (z.as_slice(), *v)))
            })
            .collect::<Result<_>>()?;
        Ok(ConditionedBundle {
            posterior,
            conditioners,
        })
    }

    pub fn posterior(&self) -> &Posterior {
        self.posterior
    }

    /// Predictive entropy minus the average conditional predictive entropy (nats).
    pub fn eig(&self, x: &[f64]) -> Result<f64> {
        Ok(self.eig_resolved(&self.posterior.resolve(x)?))
    }

    pub fn eig_resolved(&self, p: &ResolvedPoint) -> f64 {
        let before = half_log_var(self.posterior, p.variance);
        let after: f64 = self
            .conditioners
            .iter()
            .map(|c| half_log_var(self.posterior, c.latent_variance(p)))
            .sum::<f64>()
            / self.conditioners.len() as f64;
        before - after
    }

    /// Observation mean and variance at `p` under each draw.
    fn components(&self, p: &ResolvedPoint) -> Vec<(f64, f64)> {
        let noise = self.posterior.model().noise_variance;
        let floor = self.posterior.jitter();
        self.conditioners
            .iter()
            .map(|c| {
                let (m, v) = c.latent(p);
                (m, (v + noise).max(floor))
            })
            .collect()
    }
}

fn normal_logpdf(y: f64, mean: f64, var: f64) -> f64 {
    -0.5 * ((y - mean).powi(2) / var + var.ln() + std::f64::consts::TAU.ln())
}

/// Entropy (nats) of a uniformly weighted Gaussian mixture.
///
/// Exact when all components coincide. Otherwise a stratified Monte Carlo
/// estimate: draw counts are spread evenly over components (remainder to the
/// first ones) and each component's average log density is weighted equally.
pub fn mixture_entropy(components: &[(f64, f64)], draws: usize, seed: u64) -> Result<f64> {
    let (m0, v0) = *components
        .first()
        .ok_or_else(|| BaxError::input("mixture has no components"))?;
    if components
        .iter()
        .any(|(m, v)| !m.is_finite() || !(*v > 0.0))
    {
        return Err(BaxError::input(
            "mixture components need finite means and positive variances",
        ));
    }
    let same = components
        .iter()
        .all(|(m, v)| (m - m0).abs() <= 1e-12 * (1.0 + m0.abs()) && (v - v0).abs() <= 1e-12 * v0);
    if same {
        return Ok(0.5 * (LN_2PI_E + v0.ln()));
    }
    if draws == 0 {
        return Err(BaxError::config(
            "mixture entropy needs at least one Monte Carlo draw",
        ));
    }
    let c = components.len();
    let ln_c = (c as f64).ln();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut logs = vec![0.0; c];
    let mut total = 0.0;
    for (i, &(m, v)) in components.iter().enumerate() {
        let n = (draws / c + usize::from(i < draws % c)).max(1);
        let sd = v.sqrt();
        let mut acc = 0.0;
        for _ in 0..n {
            let eps: f64 = StandardNormal.sample(&mut rng);
            let y = m + sd * eps;
            let mut hi = f64::NEG_INFINITY;
            for (l, &(mk, vk)) in logs.iter_mut().zip(components) {
                *l = normal_logpdf(y, mk, vk);
                hi = hi.max(*l);
            }
            let lse = hi + logs.iter().map(|l| (l - hi).exp()).sum::<f64>().ln();
            acc += lse - ln_c;
        }
        total += acc / n as f64;
    }
    Ok(-total / c as f64)
}

/// Output-clustering acquisition state for one bundle.
///
/// Draws whose balls have identical membership share one mixture estimate and
/// one Monte Carlo seed, so the estimate is reused rather than redrawn.
pub struct OutputEig<'a> {
    paths: ConditionedBundle<'a>,
    balls: Vec<(Vec<usize>, usize, u64)>,
    draws: usize,
}

impl<'a> OutputEig<'a> {
    pub fn new(
        posterior: &'a Posterior,
        bundle: &SampleBundle,
        distance: &OutputDistance,
        policy: &AbcPolicy,
        seed: u64,
    ) -> Result<Self> {
        let paths = ConditionedBundle::on_paths(posterior, bundle)?;
        let mut grouped: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut order = Vec::new();
        for ball in output_balls(bundle, distance, policy)? {
            let count = grouped.entry(ball.clone()).or_insert(0);
            if *count == 0 {
                order.push(ball);
            }
            *count += 1;
        }
        let balls = order
            .into_iter()
            .map(|b| {
                let tags: Vec<u64> = b.iter().map(|&i| i as u64).collect();
                let s = derive_seed(seed, &tags);
                let n = grouped[&b];
                (b, n, s)
            })
            .collect();
        Ok(OutputEig {
            paths,
            balls,
            draws: policy.entropy_mc_draws,
        })
    }

    pub fn eig(&self, x: &[f64]) -> Result<f64> {
        self.eig_resolved(&self.paths.posterior.resolve(x)?)
    }

    pub fn eig_resolved(&self, p: &ResolvedPoint) -> Result<f64> {
        let posterior = self.paths.posterior;
        let before = LN_2PI_E * 0.5 + half_log_var(posterior, p.variance);
        let comps = self.paths.components(p);
        let total = self.paths.conditioners.len() as f64;
        let mut after = 0.0;
        let mut members = Vec::new();
        for (ball, count, seed) in &self.balls {
            members.clear();
            members.extend(ball.iter().map(|&k| comps[k]));
            after += *count as f64 * mixture_entropy(&members, self.draws, *seed)?;
        }
        Ok(before - after / total)
    }
}

fn data_posterior(model: &GPModel, data: &Evidence) -> Result<Posterior> {
    if !data.noiseless.is_empty() {
        return Err(BaxError::input(
            "acquisition data must hold noisy observations only",
        ));
    }
    Posterior::new(model, data)
}

/// Information gain about the execution path, conditioning on each full path.
pub fn eig_execpath(
    model: &GPModel,
    data: &Evidence,
    bundle: &SampleBundle,
    x: &[f64],
) -> Result<f64> {
    let post = data_posterior(model, data)?;
    ConditionedBundle::on_paths(&post, bundle)?.eig(x)
}

/// Information gain about the output values, conditioning on each output's pinned values.
pub fn eig_subsequence(
    model: &GPModel,
    data: &Evidence,
    bundle: &SampleBundle,
    x: &[f64],
) -> Result<f64> {
    let post = data_posterior(model, data)?;
    ConditionedBundle::on_subsequences(&post, bundle)?.eig(x)
}

/// Information gain about the output via output-space balls and mixture entropies.
pub fn eig_output(
    model: &GPModel,
    data: &Evidence,
    bundle: &SampleBundle,
    distance: &OutputDistance,
    policy: &AbcPolicy,
    x: &[f64],
    seed: u64,
) -> Result<f64> {
    let post = data_posterior(model, data)?;
    OutputEig::new(&post, bundle, distance, policy, seed)?.eig(x)
}
