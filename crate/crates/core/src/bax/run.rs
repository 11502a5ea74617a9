use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::algorithm::Algorithm;
use crate::acquisition::{
    baseline_random, eig_f_from_latent, AbcPolicy, BundleDraw, ConditionedBundle, OutputDistance,
    OutputEig, SampleBundle,
};
use crate::algorithms::AlgorithmOutput;
use crate::domain::{derive_seed, BoxDomain};
use crate::error::{BaxError, Result};
use crate::gp::{Evidence, GPModel, LazyFunctionSample, Posterior};
use crate::metrics::MetricValue;

const TAG_NOISE: u64 = 1;
const TAG_BUNDLE: u64 = 2;
const TAG_CANDIDATES: u64 = 3;
const TAG_CHOICE: u64 = 4;
const TAG_MIXTURE: u64 = 5;
const TAG_ALGORITHM: u64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Acquisition {
    /// Information gain about the full execution path.
    EIGe,
    /// Information gain about the output, via output-space clustering.
    EIGout,
    /// Information gain about the values the output pins down.
    EIGv,
    Variance,
    /// Information gain about the function value at the query.
    EIGf,
    Random,
}

impl Acquisition {
    pub const ALL: [Acquisition; 6] = [
        Acquisition::EIGe,
        Acquisition::EIGout,
        Acquisition::EIGv,
        Acquisition::Variance,
        Acquisition::EIGf,
        Acquisition::Random,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Acquisition::EIGe => "EIGe",
            Acquisition::EIGout => "EIGout",
            Acquisition::EIGv => "EIGv",
            Acquisition::Variance => "Variance",
            Acquisition::EIGf => "EIGf",
            Acquisition::Random => "Random",
        }
    }
}

impl fmt::Display for Acquisition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Acquisition {
    type Err = BaxError;

    fn from_str(s: &str) -> Result<Self> {
        Acquisition::ALL
            .iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| {
                let names: Vec<_> = Acquisition::ALL.iter().map(|a| a.name()).collect();
                BaxError::config(format!(
                    "unknown acquisition `{s}`; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Where each iteration's candidate queries come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CandidateSource {
    FixedSet {
        points: Vec<Vec<f64>>,
    },
    /// `count` fresh uniform draws from the box every iteration.
    UniformRandom {
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaxConfig {
    pub budget: usize,
    pub num_posterior_samples: usize,
    pub acquisition: Acquisition,
    pub candidate_source: CandidateSource,
    pub abc: AbcPolicy,
    /// Leading iterations that query a uniformly chosen candidate instead of maximizing.
    pub n_init: usize,
    pub seed: u64,
}

impl BaxConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(BaxError::config("budget must be at least 1"));
        }
        if self.num_posterior_samples == 0 {
            return Err(BaxError::config(
                "number of posterior samples must be at least 1",
            ));
        }
        match &self.candidate_source {
            CandidateSource::FixedSet { points } if points.is_empty() => {
                Err(BaxError::config("candidate set is empty"))
            }
            CandidateSource::UniformRandom { count: 0 } => {
                Err(BaxError::config("candidate count must be at least 1"))
            }
            _ => Ok(()),
        }
    }
}

/// The true black-box objective in modeling space, and the box it lives on.
#[derive(Clone)]
pub struct Problem {
    pub domain: BoxDomain,
    pub objective: Arc<dyn Fn(&[f64]) -> Result<f64> + Send + Sync>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcquisitionSummary {
    pub num_candidates: usize,
    pub chosen: usize,
    pub max: f64,
    pub mean: f64,
    pub min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub t: usize,
    pub x: Vec<f64>,
    pub y: f64,
    /// Absent for seeded initial queries.
    pub acquisition: Option<AcquisitionSummary>,
    /// Outputs of the posterior samples drawn after this query.
    pub sampled_outputs: Vec<AlgorithmOutput>,
    pub metrics: Vec<MetricValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: BaxConfig,
    pub model: GPModel,
    pub initial_metrics: Vec<MetricValue>,
    pub iterations: Vec<IterationRecord>,
    pub final_outputs: Vec<AlgorithmOutput>,
    pub true_evaluations: usize,
    pub valid: bool,
    pub error: Option<String>,
}

/// What a metric callback sees after each query.
pub struct IterationView<'a> {
    /// Number of true-function queries made so far.
    pub t: usize,
    pub data: &'a Evidence,
    pub posterior: &'a Posterior,
    pub bundle: &'a SampleBundle,
}

pub type MetricFn<'a> = dyn FnMut(&IterationView<'_>) -> Result<Vec<MetricValue>> + 'a;

/// `l` posterior function draws, each run through the algorithm once.
pub fn draw_bundle(
    posterior: &Arc<Posterior>,
    algorithm: &dyn Algorithm,
    num_samples: usize,
    seed: u64,
) -> Result<SampleBundle> {
    if num_samples == 0 {
        return Err(BaxError::input("bundle needs at least one sample"));
    }
    let mut draws = Vec::with_capacity(num_samples);
    for j in 0..num_samples {
        let mut sample = LazyFunctionSample::from_posterior(
            Arc::clone(posterior),
            derive_seed(seed, &[j as u64]),
        );
        let mut f = |x: &[f64]| sample.query(x);
        let (path, output) =
            algorithm.execute(&mut f, derive_seed(seed, &[j as u64, TAG_ALGORITHM]))?;
        draws.push(BundleDraw {
            sample_id: j,
            path,
            output,
        });
    }
    Ok(SampleBundle { draws })
}

/// Index of the largest value; ties go to the lowest index.
pub fn optimize_acquisition(values: &[f64]) -> Result<usize> {
    if values.is_empty() {
        return Err(BaxError::input("no acquisition values to maximize"));
    }
    if let Some(i) = values.iter().position(|v| v.is_nan()) {
        return Err(BaxError::Numerical {
            message: format!("acquisition value at candidate {i} is NaN"),
            size: values.len(),
            jitter: 0.0,
        });
    }
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Acquisition values over `candidates` for one bundle.
pub fn evaluate_acquisition(
    acquisition: Acquisition,
    posterior: &Posterior,
    bundle: &SampleBundle,
    candidates: &[Vec<f64>],
    abc: &AbcPolicy,
    seed: u64,
) -> Result<Vec<f64>> {
    let resolved = || candidates.iter().map(|x| posterior.resolve(x));
    match acquisition {
        Acquisition::EIGe => {
            let ctx = ConditionedBundle::on_paths(posterior, bundle)?;
            resolved().map(|p| Ok(ctx.eig_resolved(&p?))).collect()
        }
        Acquisition::EIGv => {
            let ctx = ConditionedBundle::on_subsequences(posterior, bundle)?;
            resolved().map(|p| Ok(ctx.eig_resolved(&p?))).collect()
        }
        Acquisition::EIGout => {
            let distance = OutputDistance::for_outputs(&bundle.outputs())?;
            let ctx = OutputEig::new(posterior, bundle, &distance, abc, seed)?;
            resolved().map(|p| ctx.eig_resolved(&p?)).collect()
        }
        Acquisition::Variance => {
            let noise = posterior.model().noise_variance;
            resolved().map(|p| Ok(p?.variance + noise)).collect()
        }
        Acquisition::EIGf => resolved()
            .map(|p| eig_f_from_latent(posterior.model(), p?.variance))
            .collect(),
        Acquisition::Random => {
            let pick = baseline_random(candidates.len(), seed)?;
            Ok((0..candidates.len())
                .map(|i| if i == pick { 1.0 } else { 0.0 })
                .collect())
        }
    }
}

struct Loop<'a> {
    config: &'a BaxConfig,
    model: &'a GPModel,
    problem: &'a Problem,
    algorithm: &'a dyn Algorithm,
    cache_points: Option<Vec<Vec<f64>>>,
    data: Evidence,
    noise_rng: ChaCha8Rng,
    evaluations: usize,
}

impl Loop<'_> {
    fn posterior(&self) -> Result<Arc<Posterior>> {
        let post = Posterior::new(self.model, &self.data)?;
        Ok(Arc::new(match &self.cache_points {
            Some(points) => post.with_point_cache(points)?,
            None => post,
        }))
    }

    fn candidates(&self, t: usize) -> Vec<Vec<f64>> {
        match &self.config.candidate_source {
            CandidateSource::FixedSet { points } => points.clone(),
            CandidateSource::UniformRandom { count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                    self.config.seed,
                    &[TAG_CANDIDATES, t as u64],
                ));
                (0..*count)
                    .map(|_| self.problem.domain.sample_uniform(&mut rng))
                    .collect()
            }
        }
    }

    fn observe(&mut self, x: &[f64]) -> Result<f64> {
        if !self.problem.domain.contains(x) {
            return Err(BaxError::input("query lies outside the problem domain"));
        }
        let f = (self.problem.objective)(x)?;
        self.evaluations += 1;
        let eps: f64 = StandardNormal.sample(&mut self.noise_rng);
        Ok(f + self.model.noise_variance.sqrt() * eps)
    }

    fn bundle(&self, posterior: &Arc<Posterior>, t: usize) -> Result<SampleBundle> {
        draw_bundle(
            posterior,
            self.algorithm,
            self.config.num_posterior_samples,
            derive_seed(self.config.seed, &[TAG_BUNDLE, t as u64]),
        )
    }

    fn step(
        &mut self,
        t: usize,
        posterior: &Posterior,
        bundle: &SampleBundle,
    ) -> Result<(Vec<f64>, f64, Option<AcquisitionSummary>)> {
        let candidates = self.candidates(t);
        let choice_seed = derive_seed(self.config.seed, &[TAG_CHOICE, t as u64]);
        let (chosen, summary) = if t <= self.config.n_init {
            (baseline_random(candidates.len(), choice_seed)?, None)
        } else {
            let values = evaluate_acquisition(
                self.config.acquisition,
                posterior,
                bundle,
                &candidates,
                &self.config.abc,
                if self.config.acquisition == Acquisition::Random {
                    choice_seed
                } else {
                    derive_seed(self.config.seed, &[TAG_MIXTURE, t as u64])
                },
            )?;
            let chosen = optimize_acquisition(&values)?;
            let n = values.len() as f64;
            let summary = AcquisitionSummary {
                num_candidates: values.len(),
                chosen,
                max: values[chosen],
                mean: values.iter().sum::<f64>() / n,
                min: values.iter().copied().fold(f64::INFINITY, f64::min),
            };
            (chosen, Some(summary))
        };
        let x = candidates[chosen].clone();
        let y = self.observe(&x)?;
        self.data.push_noisy(x.clone(), y);
        Ok((x, y, summary))
    }
}

/// Runs the InfoBAX loop for `config.budget` iterations.
///
/// Each iteration picks the candidate maximizing the acquisition under the
/// current bundle, observes it with Gaussian noise, then draws a fresh bundle
/// on the enlarged data set; `metrics` (if given) is evaluated on that bundle.
/// A failure mid-run returns the partial record with `valid = false`.
pub fn run_infobax(
    config: &BaxConfig,
    model: &GPModel,
    problem: &Problem,
    algorithm: &dyn Algorithm,
    mut metrics: Option<&mut MetricFn<'_>>,
) -> Result<RunRecord> {
    config.validate()?;
    model.validate()?;
    problem.domain.validate()?;
    let mut cache_points = algorithm.finite_domain();
    if let CandidateSource::FixedSet { points } = &config.candidate_source {
        cache_points
            .get_or_insert_with(Vec::new)
            .extend(points.iter().cloned());
    }
    let mut state = Loop {
        config,
        model,
        problem,
        algorithm,
        cache_points,
        data: Evidence::new(),
        noise_rng: ChaCha8Rng::seed_from_u64(derive_seed(config.seed, &[TAG_NOISE])),
        evaluations: 0,
    };
    let mut record = RunRecord {
        config: config.clone(),
        model: model.clone(),
        initial_metrics: Vec::new(),
        iterations: Vec::with_capacity(config.budget),
        final_outputs: Vec::new(),
        true_evaluations: 0,
        valid: true,
        error: None,
    };

    let outcome = (|| -> Result<()> {
        let mut posterior = state.posterior()?;
        let mut bundle = state.bundle(&posterior, 0)?;
        if let Some(m) = metrics.as_deref_mut() {
            record.initial_metrics = m(&IterationView {
                t: 0,
                data: &state.data,
                posterior: &posterior,
                bundle: &bundle,
            })?;
        }
        for t in 1..=config.budget {
            let (x, y, acquisition) = state.step(t, &posterior, &bundle)?;
            posterior = state.posterior()?;
            bundle = state.bundle(&posterior, t)?;
            let values = match metrics.as_deref_mut() {
                Some(m) => m(&IterationView {
                    t,
                    data: &state.data,
                    posterior: &posterior,
                    bundle: &bundle,
                })?,
                None => Vec::new(),
            };
            record.iterations.push(IterationRecord {
                t,
                x,
                y,
                acquisition,
                sampled_outputs: bundle.draws.iter().map(|d| d.output.clone()).collect(),
                metrics: values,
            });
        }
        record.final_outputs = bundle.draws.iter().map(|d| d.output.clone()).collect();
        Ok(())
    })();
    record.true_evaluations = state.evaluations;
    if let Err(e) = outcome {
        record.valid = false;
        record.error = Some(e.to_string());
    }
    Ok(record)
}
