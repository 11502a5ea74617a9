use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::acquisition::AbcPolicy;
use crate::algorithms::ESConfig;
use crate::bax::Acquisition;
use crate::domain::BoxDomain;
use crate::error::{BaxError, Result};
use crate::gp::{GPModel, KernelKind, KernelSpec};
use crate::problems::BenchmarkFn;

/// A method compared in an experiment: an acquisition, or the full algorithm run on the truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Bax(Acquisition),
    FullAlgorithm,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Bax(a) => a.name(),
            Method::FullAlgorithm => "FullAlgorithm",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = BaxError;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("FullAlgorithm") {
            return Ok(Method::FullAlgorithm);
        }
        s.parse::<Acquisition>().map(Method::Bax).map_err(|_| {
            BaxError::config(format!(
                "unknown method `{s}`; expected one of EIGe, EIGout, EIGv, Variance, EIGf, Random, FullAlgorithm"
            ))
        })
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Evolution strategy overrides; missing fields take the domain-based defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EsSettings {
    pub population: Option<usize>,
    pub generations: Option<usize>,
    pub proposal_std: Option<f64>,
    pub elite_frac: Option<f64>,
}

impl EsSettings {
    pub fn resolve(&self, domain: &BoxDomain, minimize: bool) -> ESConfig {
        let d = ESConfig::default_for(domain, minimize);
        ESConfig {
            population: self.population.unwrap_or(d.population),
            generations: self.generations.unwrap_or(d.generations),
            proposal_std: self.proposal_std.unwrap_or(d.proposal_std),
            elite_frac: self.elite_frac.unwrap_or(d.elite_frac),
            minimize,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    /// Top-k over `num_elements` points drawn uniformly from the objective's box.
    TopK {
        objective: BenchmarkFn,
        num_elements: usize,
        k: usize,
        #[serde(default)]
        bounds: Option<Vec<(f64, f64)>>,
    },
    /// Shortest path on an 8-connected grid whose edge costs come from `cost`.
    GridShortestPath {
        cost: BenchmarkFn,
        nx: usize,
        ny: usize,
        #[serde(default)]
        bounds: Option<Vec<(f64, f64)>>,
        #[serde(default)]
        source: Option<usize>,
        #[serde(default)]
        dest: Option<usize>,
    },
    /// Shortest path on a graph loaded from an edge-list file.
    EdgeListShortestPath {
        path: PathBuf,
        cost: BenchmarkFn,
        source: usize,
        dest: usize,
    },
    /// Minimization (or maximization) of a benchmark with the evolution strategy.
    LocalOpt {
        objective: BenchmarkFn,
        #[serde(default)]
        bounds: Option<Vec<(f64, f64)>>,
        #[serde(default)]
        es: EsSettings,
    },
}

impl ProblemSpec {
    /// Bounds the problem lives on (explicit or the benchmark's own).
    pub fn bounds(&self) -> Result<BoxDomain> {
        let (f, b) = match self {
            ProblemSpec::TopK {
                objective, bounds, ..
            } => (objective, bounds),
            ProblemSpec::GridShortestPath { cost, bounds, .. } => (cost, bounds),
            ProblemSpec::EdgeListShortestPath { cost, .. } => (cost, &None),
            ProblemSpec::LocalOpt {
                objective, bounds, ..
            } => (objective, bounds),
        };
        match b {
            Some(b) => BoxDomain::from_bounds(b),
            None => Ok(f.domain()),
        }
    }

    pub fn is_graph(&self) -> bool {
        matches!(
            self,
            ProblemSpec::GridShortestPath { .. } | ProblemSpec::EdgeListShortestPath { .. }
        )
    }

    fn default_samples(&self) -> usize {
        if self.is_graph() {
            20
        } else {
            100
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Lengthscale {
    Isotropic(f64),
    PerDimension(Vec<f64>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GpSettings {
    pub kernel: Option<KernelKind>,
    pub lengthscale: Option<Lengthscale>,
    pub signal_variance: Option<f64>,
    pub prior_mean: Option<f64>,
    pub noise_variance: Option<f64>,
}

/// Everything needed to reproduce an experiment. Optional fields are filled by [`ExperimentConfig::resolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub problem: ProblemSpec,
    pub methods: Vec<Method>,
    pub budget: usize,
    #[serde(default)]
    pub num_posterior_samples: Option<usize>,
    /// Candidates per iteration on continuous domains.
    #[serde(default)]
    pub num_candidates: Option<usize>,
    #[serde(default)]
    pub n_init: usize,
    #[serde(default)]
    pub abc: AbcPolicy,
    #[serde(default)]
    pub gp: GpSettings,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
}

fn default_name() -> String {
    "experiment".into()
}

fn default_trials() -> usize {
    5
}

impl ExperimentConfig {
    /// Fills every optional field with its default so the config echoes all settings.
    pub fn resolve(mut self) -> Result<Self> {
        if self.trials == 0 {
            return Err(BaxError::config("trials must be at least 1"));
        }
        if self.budget == 0 {
            return Err(BaxError::config("budget must be at least 1"));
        }
        if self.methods.is_empty() {
            return Err(BaxError::config("at least one method is required"));
        }
        let domain = self.problem.bounds()?;
        self.num_posterior_samples
            .get_or_insert(self.problem.default_samples());
        if !self.problem.is_graph() && !matches!(self.problem, ProblemSpec::TopK { .. }) {
            self.num_candidates.get_or_insert(1000);
        }
        if let ProblemSpec::LocalOpt { objective, es, .. } = &mut self.problem {
            let r = es.resolve(&domain, objective.minimize());
            *es = EsSettings {
                population: Some(r.population),
                generations: Some(r.generations),
                proposal_std: Some(r.proposal_std),
                elite_frac: Some(r.elite_frac),
            };
        }
        let gp = &mut self.gp;
        gp.kernel.get_or_insert(KernelKind::SquaredExponential);
        if gp.lengthscale.is_none() {
            gp.lengthscale = Some(Lengthscale::PerDimension(
                domain.sides().iter().map(|s| 0.1 * s).collect(),
            ));
        }
        gp.signal_variance.get_or_insert(1.0);
        gp.prior_mean.get_or_insert(0.0);
        gp.noise_variance.get_or_insert(1e-2);
        self.model()?;
        Ok(self)
    }

    pub fn model(&self) -> Result<GPModel> {
        let gp = &self.gp;
        let missing = || BaxError::config("GP settings are unresolved; call resolve first");
        let lengthscale = match gp.lengthscale.as_ref().ok_or_else(missing)? {
            Lengthscale::Isotropic(l) => vec![*l],
            Lengthscale::PerDimension(v) => v.clone(),
        };
        let kernel = KernelSpec::new(
            gp.kernel.ok_or_else(missing)?,
            lengthscale,
            gp.signal_variance.ok_or_else(missing)?,
        )?;
        GPModel::new(
            kernel,
            gp.prior_mean.ok_or_else(missing)?,
            gp.noise_variance.ok_or_else(missing)?,
        )
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| BaxError::config(e.to_string()))
    }
}

/// Parses a TOML experiment description; errors name the offending key path.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let de = toml::Deserializer::new(text);
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let msg = inner.message().trim().to_string();
        let line = inner
            .span()
            .map(|s| text[..s.start.min(text.len())].lines().count().max(1))
            .unwrap_or(0);
        BaxError::Parse {
            line,
            message: if path.is_empty() || path == "." {
                msg
            } else {
                format!("at `{path}`: {msg}")
            },
        }
    })?;
    cfg.resolve()
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| BaxError::io(path, e))?;
    parse_config_str(&text)
}
