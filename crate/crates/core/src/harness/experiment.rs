use std::cell::Cell;
use std::rc::Rc;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Method, ProblemSpec};
use crate::acquisition::OutputDistance;
use crate::algorithms::{load_graph, AlgorithmOutput, ESConfig, Graph};
use crate::bax::{
    estimate_output, refine_local_opt, run_infobax, Algorithm, BaxConfig, CandidateSource,
    EvolutionAlgorithm, IterationView, Problem, RunRecord, ShortestPathAlgorithm, TopKAlgorithm,
};
use crate::domain::{derive_seed, BoxDomain};
use crate::error::{BaxError, Result};
use crate::metrics::{jaccard_points, path_area_error, simple_regret, MetricValue};
use crate::problems::{eval_benchmark, make_grid_graph, BenchmarkFn, PositivityTransform};

const TAG_TOPK_SET: u64 = 11;

/// How outputs are scored against the truth.
#[derive(Debug, Clone)]
pub enum Scoring {
    TopK {
        truth: Vec<Vec<f64>>,
    },
    Path {
        truth: AlgorithmOutput,
        normalizer: f64,
    },
    Optimum {
        objective: BenchmarkFn,
        optimum: f64,
        minimize: bool,
        es: ESConfig,
        domain: BoxDomain,
    },
}

/// A fully built experiment problem: truth, algorithm, candidates and scoring.
pub struct Instance {
    pub problem: Problem,
    pub algorithm: Arc<dyn Algorithm>,
    pub candidates: CandidateSource,
    pub ground_truth: AlgorithmOutput,
    pub scoring: Scoring,
}

fn graph_instance(graph: Graph, cost: BenchmarkFn, source: usize, dest: usize) -> Result<Instance> {
    let midpoints = graph.distinct_midpoints();
    let raw: Vec<f64> = midpoints
        .iter()
        .map(|m| eval_benchmark(&cost, m))
        .collect::<Result<_>>()?;
    if let Some(c) = raw.iter().find(|c| !(**c >= 0.0)) {
        return Err(BaxError::config(format!(
            "edge cost function returned {c}; costs must be nonnegative"
        )));
    }
    let transform = PositivityTransform::max_normalized(raw.iter().copied())?;
    let objective: Arc<dyn Fn(&[f64]) -> Result<f64> + Send + Sync> =
        Arc::new(move |x: &[f64]| transform.to_model(eval_benchmark(&cost, x)?));
    let normalizer = graph.bounding_box_area();
    let lo = |k: usize| midpoints.iter().map(|m| m[k]).fold(f64::INFINITY, f64::min);
    let hi = |k: usize| {
        midpoints
            .iter()
            .map(|m| m[k])
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let mut bounds = Vec::new();
    for k in 0..2 {
        let (a, b) = (lo(k), hi(k));
        bounds.push(if b > a { (a, b) } else { (a - 0.5, a + 0.5) });
    }
    let domain = BoxDomain::from_bounds(&bounds)?;
    let algorithm = ShortestPathAlgorithm {
        graph: Arc::new(graph),
        source,
        dest,
    };
    let mut f = |x: &[f64]| objective(x);
    let (_, truth) = algorithm.execute(&mut f, 0)?;
    Ok(Instance {
        problem: Problem { domain, objective },
        candidates: CandidateSource::FixedSet { points: midpoints },
        algorithm: Arc::new(algorithm),
        ground_truth: truth.clone(),
        scoring: Scoring::Path { truth, normalizer },
    })
}

/// Builds the problem instance shared by every method and trial of an experiment.
pub fn build_instance(cfg: &ExperimentConfig) -> Result<Instance> {
    let domain = cfg.problem.bounds()?;
    match &cfg.problem {
        ProblemSpec::TopK {
            objective,
            num_elements,
            k,
            ..
        } => {
            if objective.dim() != domain.dim() {
                return Err(BaxError::config(
                    "top-k bounds do not match the objective's dimension",
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.base_seed, &[TAG_TOPK_SET]));
            let elements: Vec<Vec<f64>> = (0..*num_elements)
                .map(|_| domain.sample_uniform(&mut rng))
                .collect();
            let f = *objective;
            let objective: Arc<dyn Fn(&[f64]) -> Result<f64> + Send + Sync> =
                Arc::new(move |x: &[f64]| eval_benchmark(&f, x));
            let algorithm = TopKAlgorithm {
                elements: elements.clone(),
                k: *k,
            };
            let mut g = |x: &[f64]| objective(x);
            let (_, truth) = algorithm.execute(&mut g, 0)?;
            let truth_set = match &truth {
                AlgorithmOutput::TopK { elements, .. } => elements.clone(),
                _ => unreachable!("top-k returns a top-k output"),
            };
            Ok(Instance {
                problem: Problem { domain, objective },
                algorithm: Arc::new(algorithm),
                candidates: CandidateSource::FixedSet { points: elements },
                ground_truth: truth,
                scoring: Scoring::TopK { truth: truth_set },
            })
        }
        ProblemSpec::GridShortestPath {
            cost,
            nx,
            ny,
            source,
            dest,
            ..
        } => {
            let graph = make_grid_graph(*nx, *ny, &domain)?;
            graph_instance(
                graph,
                *cost,
                source.unwrap_or(0),
                dest.unwrap_or(nx * ny - 1),
            )
        }
        ProblemSpec::EdgeListShortestPath {
            path,
            cost,
            source,
            dest,
        } => graph_instance(load_graph(path)?, *cost, *source, *dest),
        ProblemSpec::LocalOpt { objective, es, .. } => {
            let minimize = objective.minimize();
            let es = es.resolve(&domain, minimize);
            let f = *objective;
            let objective_fn: Arc<dyn Fn(&[f64]) -> Result<f64> + Send + Sync> =
                Arc::new(move |x: &[f64]| eval_benchmark(&f, x));
            let algorithm = EvolutionAlgorithm {
                config: es.clone(),
                domain: domain.clone(),
            };
            let mut g = |x: &[f64]| objective_fn(x);
            let (_, truth) = algorithm.execute(&mut g, cfg.base_seed)?;
            let optimum = match (objective.optimum_value(), &truth) {
                (Some(v), _) => v,
                (None, AlgorithmOutput::LocalOpt { f_star, .. }) => *f_star,
                _ => unreachable!("evolution strategy returns a local optimum"),
            };
            Ok(Instance {
                problem: Problem {
                    domain: domain.clone(),
                    objective: objective_fn,
                },
                algorithm: Arc::new(algorithm),
                candidates: CandidateSource::UniformRandom {
                    count: cfg.num_candidates.unwrap_or(1000),
                },
                ground_truth: truth,
                scoring: Scoring::Optimum {
                    objective: *objective,
                    optimum,
                    minimize,
                    es,
                    domain,
                },
            })
        }
    }
}

fn metric(name: &str, value: f64, iteration: usize) -> MetricValue {
    MetricValue {
        name: name.into(),
        value,
        iteration,
    }
}

impl Scoring {
    /// Metric names this scoring emits, headline metric first.
    pub fn metric_names(&self) -> &'static [&'static str] {
        match self {
            Scoring::TopK { .. } => &["jaccard", "jaccard_sample_mean"],
            Scoring::Path { .. } => &["area", "area_sample_mean"],
            Scoring::Optimum { .. } => &["regret"],
        }
    }

    /// Scores one output directly (used for the full algorithm).
    pub fn score_output(&self, output: &AlgorithmOutput) -> Result<f64> {
        match (self, output) {
            (Scoring::TopK { truth }, AlgorithmOutput::TopK { elements, .. }) => {
                Ok(jaccard_points(elements, truth))
            }
            (Scoring::Path { truth, normalizer }, AlgorithmOutput::GraphPath { .. }) => {
                path_area_error(output, truth, *normalizer)
            }
            (
                Scoring::Optimum {
                    objective,
                    optimum,
                    minimize,
                    ..
                },
                AlgorithmOutput::LocalOpt { x_star, .. },
            ) => Ok(simple_regret(
                eval_benchmark(objective, x_star)?,
                *optimum,
                *minimize,
            )),
            _ => Err(BaxError::input("output kind does not match the experiment")),
        }
    }

    /// Metrics for the posterior after `view.t` queries.
    pub fn evaluate(&self, view: &IterationView<'_>, refine_seed: u64) -> Result<Vec<MetricValue>> {
        let t = view.t;
        match self {
            Scoring::TopK { .. } | Scoring::Path { .. } => {
                let names = self.metric_names();
                let distance = OutputDistance::for_outputs(&view.bundle.outputs())?;
                let medoid = estimate_output(view.bundle, &distance)?;
                let mut total = 0.0;
                for d in &view.bundle.draws {
                    total += self.score_output(&d.output)?;
                }
                Ok(vec![
                    metric(names[0], self.score_output(&medoid)?, t),
                    metric(names[1], total / view.bundle.len() as f64, t),
                ])
            }
            Scoring::Optimum { es, domain, .. } => {
                let est = refine_local_opt(view.posterior, es, domain, refine_seed)?;
                Ok(vec![metric("regret", self.score_output(&est)?, t)])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub method: String,
    pub trial: usize,
    pub iteration: usize,
    pub metric: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub method: String,
    pub trial: usize,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunEntry {
    pub method: String,
    pub trial: usize,
    pub seed: u64,
    pub record: RunRecord,
}

/// Long-format results plus the run records that produced them.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ResultsTable {
    pub rows: Vec<ResultRow>,
    pub runs: Vec<RunEntry>,
    pub failures: Vec<RunFailure>,
}

/// Mean and standard error of one metric at one iteration across trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryPoint {
    pub iteration: usize,
    pub mean: f64,
    pub std_err: f64,
    pub count: usize,
}

impl ResultsTable {
    pub fn metrics(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.metric) {
                out.push(r.metric.clone());
            }
        }
        out
    }

    pub fn methods(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.method) {
                out.push(r.method.clone());
            }
        }
        out
    }

    /// Values of `metric` for `method`, per trial, indexed by iteration.
    pub fn series(&self, method: &str, metric: &str, trial: usize) -> Vec<(usize, f64)> {
        self.rows
            .iter()
            .filter(|r| r.method == method && r.metric == metric && r.trial == trial)
            .map(|r| (r.iteration, r.value))
            .collect()
    }

    /// Per-iteration mean and standard error of `metric` for `method`, in iteration order.
    pub fn summarize(&self, method: &str, metric: &str) -> Vec<SummaryPoint> {
        let mut by_iter: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
        for r in self
            .rows
            .iter()
            .filter(|r| r.method == method && r.metric == metric)
        {
            by_iter.entry(r.iteration).or_default().push(r.value);
        }
        by_iter
            .into_iter()
            .map(|(iteration, v)| {
                let n = v.len() as f64;
                let mean = v.iter().sum::<f64>() / n;
                let std_err = if v.len() > 1 {
                    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
                        / n.sqrt()
                } else {
                    0.0
                };
                SummaryPoint {
                    iteration,
                    mean,
                    std_err,
                    count: v.len(),
                }
            })
            .collect()
    }
}

/// Runs the full algorithm on the truth, counting its queries.
fn run_full_algorithm(instance: &Instance, seed: u64) -> Result<(usize, AlgorithmOutput)> {
    let calls = Rc::new(Cell::new(0usize));
    let counter = Rc::clone(&calls);
    let objective = Arc::clone(&instance.problem.objective);
    let mut f = move |x: &[f64]| {
        counter.set(counter.get() + 1);
        objective(x)
    };
    let (_, out) = instance.algorithm.execute(&mut f, seed)?;
    Ok((calls.get(), out))
}

/// Runs one method for one trial, appending rows to `table`.
pub fn run_trial(
    cfg: &ExperimentConfig,
    instance: &Instance,
    method: Method,
    trial: usize,
    table: &mut ResultsTable,
) -> Result<()> {
    let seed = cfg.base_seed.wrapping_add(trial as u64);
    let name = method.name().to_string();
    match method {
        Method::FullAlgorithm => match run_full_algorithm(instance, seed) {
            Ok((queries, out)) => {
                for m in instance.scoring.metric_names() {
                    table.rows.push(ResultRow {
                        method: name.clone(),
                        trial,
                        iteration: queries,
                        metric: m.to_string(),
                        value: instance.scoring.score_output(&out)?,
                    });
                }
            }
            Err(e) => table.failures.push(RunFailure {
                method: name,
                trial,
                error: e.to_string(),
            }),
        },
        Method::Bax(acquisition) => {
            let bax = BaxConfig {
                budget: cfg.budget,
                num_posterior_samples: cfg.num_posterior_samples.unwrap_or(1),
                acquisition,
                candidate_source: instance.candidates.clone(),
                abc: cfg.abc,
                n_init: cfg.n_init,
                seed,
            };
            let model = cfg.model()?;
            let scoring = &instance.scoring;
            let mut metrics = |view: &IterationView<'_>| scoring.evaluate(view, seed);
            let record = run_infobax(
                &bax,
                &model,
                &instance.problem,
                instance.algorithm.as_ref(),
                Some(&mut metrics),
            )?;
            for m in record.iterations.iter().flat_map(|it| it.metrics.iter()) {
                table.rows.push(ResultRow {
                    method: name.clone(),
                    trial,
                    iteration: m.iteration,
                    metric: m.name.clone(),
                    value: m.value,
                });
            }
            if !record.valid {
                table.failures.push(RunFailure {
                    method: name.clone(),
                    trial,
                    error: record.error.clone().unwrap_or_default(),
                });
            }
            table.runs.push(RunEntry {
                method: name,
                trial,
                seed,
                record,
            });
        }
    }
    Ok(())
}

/// Runs every method for every trial, in (method, trial) order.
pub fn execute_experiment(cfg: &ExperimentConfig) -> Result<ResultsTable> {
    let instance = build_instance(cfg)?;
    let mut table = ResultsTable::default();
    for &method in &cfg.methods {
        for trial in 0..cfg.trials {
            run_trial(cfg, &instance, method, trial, &mut table)?;
        }
    }
    Ok(table)
}
