use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::kernel::KernelSpec;
use super::linalg::{GrowingCholesky, BASE_RELATIVE_JITTER, MAX_RELATIVE_JITTER};
use crate::error::{BaxError, Result};

/// Prior over functions: kernel, constant mean and Gaussian observation noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GPModel {
    pub kernel: KernelSpec,
    pub prior_mean: f64,
    /// Observation noise variance.
    pub noise_variance: f64,
}

impl GPModel {
    pub fn new(kernel: KernelSpec, prior_mean: f64, noise_variance: f64) -> Result<Self> {
        let model = GPModel {
            kernel,
            prior_mean,
            noise_variance,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel.validate()?;
        if !(self.noise_variance >= 0.0) || !self.noise_variance.is_finite() {
            return Err(BaxError::input(format!(
                "noise variance must be nonnegative, got {}",
                self.noise_variance
            )));
        }
        if !self.prior_mean.is_finite() {
            return Err(BaxError::input("prior mean must be finite"));
        }
        Ok(())
    }

    pub(crate) fn base_jitter(&self) -> f64 {
        BASE_RELATIVE_JITTER * self.kernel.signal_variance
    }

    pub(crate) fn max_jitter(&self) -> f64 {
        MAX_RELATIVE_JITTER * self.kernel.signal_variance
    }
}

/// Noisy observations plus exact function values used as noiseless evidence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub noisy: Vec<(Vec<f64>, f64)>,
    pub noiseless: Vec<(Vec<f64>, f64)>,
}

impl Evidence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_noisy(noisy: Vec<(Vec<f64>, f64)>) -> Self {
        Evidence {
            noisy,
            noiseless: Vec::new(),
        }
    }

    pub fn push_noisy(&mut self, x: Vec<f64>, y: f64) {
        self.noisy.push((x, y));
    }

    pub fn push_noiseless(&mut self, z: Vec<f64>, fz: f64) {
        self.noiseless.push((z, fz));
    }

    pub fn len(&self) -> usize {
        self.noisy.len() + self.noiseless.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Shared input dimension, or `None` for empty evidence.
    pub fn dim(&self) -> Result<Option<usize>> {
        let mut dim = None;
        for (x, v) in self.noisy.iter().chain(&self.noiseless) {
            if !v.is_finite() || x.iter().any(|c| !c.is_finite()) {
                return Err(BaxError::input("evidence contains non-finite values"));
            }
            match dim {
                None => dim = Some(x.len()),
                Some(d) if d != x.len() => {
                    return Err(BaxError::input(format!(
                        "evidence mixes input dimensions {d} and {}",
                        x.len()
                    )))
                }
                _ => {}
            }
        }
        Ok(dim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMarginal {
    pub mean: f64,
    pub variance: f64,
}

/// Differential entropy of a normal distribution, in nats.
pub fn gaussian_entropy(variance: f64) -> Result<f64> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(BaxError::input(format!(
            "entropy needs a positive finite variance, got {variance}"
        )));
    }
    Ok(0.5 * (2.0 * PI * std::f64::consts::E * variance).ln())
}

pub(crate) type PointKey = Vec<u64>;

pub(crate) fn point_key(x: &[f64]) -> PointKey {
    // +0.0 and -0.0 compare equal, so they must hash equal
    x.iter()
        .map(|v| if *v == 0.0 { 0 } else { v.to_bits() })
        .collect()
}

/// An input with its posterior statistics precomputed.
#[derive(Debug, Clone)]
pub struct ResolvedPoint {
    pub x: Vec<f64>,
    /// Posterior mean of the latent function.
    pub mean: f64,
    /// Posterior variance of the latent function, clamped at zero.
    pub variance: f64,
    whitened: Vec<f64>,
    cache_index: Option<usize>,
}

/// Dense posterior covariance over a fixed finite point set.
#[derive(Debug, Clone)]
struct PointCache {
    index: HashMap<PointKey, usize>,
    mean: Vec<f64>,
    variance: Vec<f64>,
    covariance: DMatrix<f64>,
    whitened: DMatrix<f64>,
}

/// A GP conditioned on a fixed body of evidence.
///
/// Noisy rows of the extended Gram matrix carry the observation noise on the
/// diagonal, noiseless rows carry none; every row gets the jitter.
#[derive(Debug, Clone)]
pub struct Posterior {
    model: GPModel,
    dim: Option<usize>,
    inputs: Vec<Vec<f64>>,
    lower: DMatrix<f64>,
    alpha: DVector<f64>,
    jitter: f64,
    cache: Option<PointCache>,
}

impl Posterior {
    pub fn new(model: &GPModel, evidence: &Evidence) -> Result<Self> {
        model.validate()?;
        let dim = evidence.dim()?;
        if let Some(d) = dim {
            model.kernel.check_dim(d)?;
        }
        let n = evidence.len();
        let mut inputs = Vec::with_capacity(n);
        let mut targets = DVector::zeros(n);
        let mut noise = Vec::with_capacity(n);
        for (x, y) in &evidence.noisy {
            targets[inputs.len()] = y - model.prior_mean;
            inputs.push(x.clone());
            noise.push(model.noise_variance);
        }
        for (z, fz) in &evidence.noiseless {
            targets[inputs.len()] = fz - model.prior_mean;
            inputs.push(z.clone());
            noise.push(0.0);
        }

        let gram = DMatrix::from_fn(n, n, |i, j| {
            model.kernel.eval_unchecked(&inputs[i], &inputs[j])
        });
        let mut jitter = model.base_jitter();
        let chol = loop {
            let mut a = gram.clone();
            for i in 0..n {
                a[(i, i)] += noise[i] + jitter;
            }
            if let Some(c) = a.cholesky() {
                break c;
            }
            jitter *= 10.0;
            if jitter > model.max_jitter() * (1.0 + 1e-12) {
                let diag_max = (0..n).map(|i| gram[(i, i)]).fold(0.0, f64::max);
                return Err(BaxError::Numerical {
                    message: format!(
                        "extended Gram matrix not positive definite ({} noisy, {} noiseless rows, max diagonal {diag_max:e})",
                        evidence.noisy.len(),
                        evidence.noiseless.len()
                    ),
                    size: n,
                    jitter: jitter / 10.0,
                });
            }
        };
        let alpha = chol.solve(&targets);
        Ok(Posterior {
            model: model.clone(),
            dim,
            inputs,
            lower: chol.l(),
            alpha,
            jitter,
            cache: None,
        })
    }

    /// Precomputes posterior means and the joint covariance over `points`.
    ///
    /// Later lookups of these exact inputs are O(1), which makes repeated
    /// sampling over a finite domain (a top-k set, graph edge midpoints) cheap.
    pub fn with_point_cache(mut self, points: &[Vec<f64>]) -> Result<Self> {
        let mut index = HashMap::new();
        let mut unique: Vec<&Vec<f64>> = Vec::new();
        for p in points {
            self.check_input(p)?;
            index.entry(point_key(p)).or_insert_with(|| {
                unique.push(p);
                unique.len() - 1
            });
        }
        let t = self.inputs.len();
        let m = unique.len();
        let cross = DMatrix::from_fn(t, m, |i, j| {
            self.model.kernel.eval_unchecked(&self.inputs[i], unique[j])
        });
        let whitened = if t == 0 {
            cross.clone()
        } else {
            self.lower
                .solve_lower_triangular(&cross)
                .ok_or_else(|| BaxError::Numerical {
                    message: "triangular solve failed while caching points".into(),
                    size: t,
                    jitter: self.jitter,
                })?
        };
        let mut covariance = DMatrix::from_fn(m, m, |i, j| {
            self.model.kernel.eval_unchecked(unique[i], unique[j])
        });
        let mut mean = vec![self.model.prior_mean; m];
        if t > 0 {
            covariance -= whitened.transpose() * &whitened;
            let shift = cross.transpose() * &self.alpha;
            for (mj, s) in mean.iter_mut().zip(shift.iter()) {
                *mj += s;
            }
        }
        let variance = (0..m).map(|j| covariance[(j, j)].max(0.0)).collect();
        self.cache = Some(PointCache {
            index,
            mean,
            variance,
            covariance,
            whitened,
        });
        Ok(self)
    }

    pub fn model(&self) -> &GPModel {
        &self.model
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn num_evidence(&self) -> usize {
        self.inputs.len()
    }

    pub(crate) fn check_input(&self, x: &[f64]) -> Result<()> {
        if let Some(d) = self.dim {
            if x.len() != d {
                return Err(BaxError::input(format!(
                    "query has dimension {} but evidence has dimension {d}",
                    x.len()
                )));
            }
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(BaxError::input("query input is not finite"));
        }
        self.model.kernel.check_dim(x.len())
    }

    /// Posterior statistics for `x`, reusing the point cache when possible.
    pub fn resolve(&self, x: &[f64]) -> Result<ResolvedPoint> {
        self.check_input(x)?;
        if let Some(cache) = &self.cache {
            if let Some(&j) = cache.index.get(&point_key(x)) {
                return Ok(ResolvedPoint {
                    x: x.to_vec(),
                    mean: cache.mean[j],
                    variance: cache.variance[j],
                    whitened: cache.whitened.column(j).iter().copied().collect(),
                    cache_index: Some(j),
                });
            }
        }
        let t = self.inputs.len();
        let prior_var = self.model.kernel.signal_variance;
        if t == 0 {
            return Ok(ResolvedPoint {
                x: x.to_vec(),
                mean: self.model.prior_mean,
                variance: prior_var,
                whitened: Vec::new(),
                cache_index: None,
            });
        }
        let k = DVector::from_fn(t, |i, _| {
            self.model.kernel.eval_unchecked(&self.inputs[i], x)
        });
        let mean = self.model.prior_mean + k.dot(&self.alpha);
        let w = self
            .lower
            .solve_lower_triangular(&k)
            .ok_or_else(|| BaxError::Numerical {
                message: "triangular solve failed".into(),
                size: t,
                jitter: self.jitter,
            })?;
        let variance = (self.model.kernel.eval_unchecked(x, x) - w.dot(&w)).max(0.0);
        Ok(ResolvedPoint {
            x: x.to_vec(),
            mean,
            variance,
            whitened: w.iter().copied().collect(),
            cache_index: None,
        })
    }

    /// Posterior covariance of the latent function between two resolved points.
    #[inline]
    pub fn covariance(&self, a: &ResolvedPoint, b: &ResolvedPoint) -> f64 {
        if let (Some(i), Some(j), Some(cache)) = (a.cache_index, b.cache_index, &self.cache) {
            return cache.covariance[(i, j)];
        }
        let prior = self.model.kernel.eval_unchecked(&a.x, &b.x);
        let reduction: f64 = a.whitened.iter().zip(&b.whitened).map(|(u, v)| u * v).sum();
        prior - reduction
    }

    pub fn marginal(&self, x: &[f64], predict_observation: bool) -> Result<GaussianMarginal> {
        let r = self.resolve(x)?;
        Ok(GaussianMarginal {
            mean: r.mean,
            variance: if predict_observation {
                r.variance + self.model.noise_variance
            } else {
                r.variance
            },
        })
    }

    /// Posterior mean of the latent function.
    pub fn mean(&self, x: &[f64]) -> Result<f64> {
        if self.inputs.is_empty() {
            self.check_input(x)?;
            return Ok(self.model.prior_mean);
        }
        self.check_input(x)?;
        let mut m = self.model.prior_mean;
        for (xi, a) in self.inputs.iter().zip(self.alpha.iter()) {
            m += self.model.kernel.eval_unchecked(xi, x) * a;
        }
        Ok(m)
    }
}

/// Predictive distribution at `x` given mixed noisy and noiseless evidence.
///
/// With `predict_observation` the observation noise is added to the variance.
pub fn posterior_marginal(
    model: &GPModel,
    evidence: &Evidence,
    x: &[f64],
    predict_observation: bool,
) -> Result<GaussianMarginal> {
    Posterior::new(model, evidence)?.marginal(x, predict_observation)
}

/// Further conditions a [`Posterior`] on a set of exact function values.
///
/// Equivalent to refactoring the extended Gram matrix with the extra rows
/// appended, but only costs a factorization in the number of extra points.
#[derive(Debug, Clone)]
pub struct NoiselessConditioner<'a> {
    posterior: &'a Posterior,
    points: Vec<ResolvedPoint>,
    factor: GrowingCholesky,
    whitened_residual: Vec<f64>,
}

impl<'a> NoiselessConditioner<'a> {
    /// Duplicate inputs are conditioned on once (first value wins).
    pub fn new<'p, I>(posterior: &'a Posterior, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'p [f64], f64)>,
    {
        let mut seen = std::collections::HashSet::new();
        let mut points: Vec<ResolvedPoint> = Vec::new();
        let mut residual = Vec::new();
        let mut factor = GrowingCholesky::new();
        let mut cross = Vec::new();
        let jitter = posterior.jitter;
        let max_jitter = posterior.model.max_jitter().max(jitter);
        for (z, fz) in pairs {
            if !seen.insert(point_key(z)) {
                continue;
            }
            let p = posterior.resolve(z)?;
            cross.clear();
            cross.extend(points.iter().map(|q| posterior.covariance(q, &p)));
            let diag = posterior.covariance(&p, &p);
            factor.push(&cross, diag, jitter, max_jitter)?;
            residual.push(fz - p.mean);
            points.push(p);
        }
        factor.forward_solve(&mut residual);
        Ok(NoiselessConditioner {
            posterior,
            points,
            factor,
            whitened_residual: residual,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn whitened_cross(&self, x: &ResolvedPoint) -> Vec<f64> {
        let mut c: Vec<f64> = self
            .points
            .iter()
            .map(|p| self.posterior.covariance(p, x))
            .collect();
        self.factor.forward_solve(&mut c);
        c
    }

    /// Latent mean and variance at `x`.
    pub fn latent(&self, x: &ResolvedPoint) -> (f64, f64) {
        if self.points.is_empty() {
            return (x.mean, x.variance);
        }
        let c = self.whitened_cross(x);
        let mean = x.mean
            + c.iter()
                .zip(&self.whitened_residual)
                .map(|(a, b)| a * b)
                .sum::<f64>();
        let var = (x.variance - c.iter().map(|v| v * v).sum::<f64>()).max(0.0);
        (mean, var)
    }

    /// Latent variance only; skips the mean accumulation.
    pub fn latent_variance(&self, x: &ResolvedPoint) -> f64 {
        if self.points.is_empty() {
            return x.variance;
        }
        let c = self.whitened_cross(x);
        (x.variance - c.iter().map(|v| v * v).sum::<f64>()).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::kernel::KernelKind;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn se_model(ls: f64, sv: f64, noise: f64) -> GPModel {
        GPModel::new(KernelSpec::squared_exponential(ls, sv).unwrap(), 0.0, noise).unwrap()
    }

    /// Dense LU solve of the heteroscedastic system with per-point noise.
    fn hetero_oracle(
        model: &GPModel,
        xs: &[Vec<f64>],
        ys: &[f64],
        noise: &[f64],
        jitter: f64,
        x: &[f64],
    ) -> (f64, f64) {
        let n = xs.len();
        let k = |a: &[f64], b: &[f64]| model.kernel.eval_unchecked(a, b);
        if n == 0 {
            return (model.prior_mean, k(x, x));
        }
        let mut a = DMatrix::from_fn(n, n, |i, j| k(&xs[i], &xs[j]));
        for i in 0..n {
            a[(i, i)] += noise[i] + jitter;
        }
        let kx = DVector::from_fn(n, |i, _| k(&xs[i], x));
        let y = DVector::from_fn(n, |i, _| ys[i] - model.prior_mean);
        let lu = a.lu();
        let sy = lu.solve(&y).unwrap();
        let sk = lu.solve(&kx).unwrap();
        (model.prior_mean + kx.dot(&sy), k(x, x) - kx.dot(&sk))
    }

    #[test]
    fn empty_evidence_is_prior() {
        let model = GPModel::new(
            KernelSpec::squared_exponential(1.0, 2.0).unwrap(),
            0.5,
            0.01,
        )
        .unwrap();
        let m = posterior_marginal(&model, &Evidence::new(), &[0.3], true).unwrap();
        assert_eq!(m.mean, 0.5);
        assert_abs_diff_eq!(m.variance, 2.01, epsilon = 1e-15);
        let latent = posterior_marginal(&model, &Evidence::new(), &[0.3], false).unwrap();
        assert_abs_diff_eq!(latent.variance, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn noiseless_point_is_interpolated() {
        let model = se_model(1.0, 1.0, 0.01);
        let mut ev = Evidence::new();
        ev.push_noisy(vec![0.0], 0.4);
        ev.push_noiseless(vec![1.0], -0.7);
        let m = posterior_marginal(&model, &ev, &[1.0], true).unwrap();
        assert_abs_diff_eq!(m.mean, -0.7, epsilon = 1e-6);
        assert_abs_diff_eq!(m.variance, 0.01, epsilon = 1e-6);
    }

    #[test]
    fn single_noisy_observation_scalar_solve() {
        // lengthscale 1, variance 1, x1 = 0, y1 = 2, sigma^2 = 0.1, query x = 0.5
        let model = se_model(1.0, 1.0, 0.1);
        let ev = Evidence::from_noisy(vec![(vec![0.0], 2.0)]);
        let m = posterior_marginal(&model, &ev, &[0.5], false).unwrap();
        let jitter = 1e-8;
        let kx = (-0.125f64).exp();
        let denom = 1.0 + 0.1 + jitter;
        assert_abs_diff_eq!(m.mean, kx * 2.0 / denom, epsilon = 1e-12);
        assert_abs_diff_eq!(m.variance, 1.0 - kx * kx / denom, epsilon = 1e-12);
    }

    #[test]
    fn mixed_evidence_matches_heteroscedastic_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let model = GPModel::new(
                KernelSpec::new(KernelKind::Matern52, vec![0.8, 1.3], 1.7).unwrap(),
                0.3,
                0.05,
            )
            .unwrap();
            let n_noisy = rng.gen_range(0..12);
            let n_exact = rng.gen_range(0..12);
            let mut ev = Evidence::new();
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            let mut noise = Vec::new();
            for _ in 0..n_noisy {
                let x = vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
                let y = rng.gen_range(-2.0..2.0);
                ev.push_noisy(x.clone(), y);
                xs.push(x);
                ys.push(y);
                noise.push(0.05);
            }
            for _ in 0..n_exact {
                let x = vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
                let y = rng.gen_range(-2.0..2.0);
                ev.push_noiseless(x.clone(), y);
                xs.push(x);
                ys.push(y);
                noise.push(0.0);
            }
            let q = vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let got = posterior_marginal(&model, &ev, &q, false).unwrap();
            let jitter = Posterior::new(&model, &ev).unwrap().jitter();
            let (m, v) = hetero_oracle(&model, &xs, &ys, &noise, jitter, &q);
            assert_abs_diff_eq!(got.mean, m, epsilon = 1e-8);
            assert_abs_diff_eq!(got.variance, v.max(0.0), epsilon = 1e-8);
        }
    }

    #[test]
    fn conditioner_matches_extended_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let model = se_model(0.6, 1.0, 0.02);
        let noisy: Vec<_> = (0..8)
            .map(|_| (vec![rng.gen_range(0.0..4.0)], rng.gen_range(-1.0..1.0)))
            .collect();
        let exact: Vec<_> = (0..6)
            .map(|_| (vec![rng.gen_range(0.0..4.0)], rng.gen_range(-1.0..1.0)))
            .collect();
        let base = Posterior::new(&model, &Evidence::from_noisy(noisy.clone())).unwrap();
        let cond = NoiselessConditioner::new(&base, exact.iter().map(|(z, v)| (z.as_slice(), *v)))
            .unwrap();
        let full = Posterior::new(
            &model,
            &Evidence {
                noisy,
                noiseless: exact,
            },
        )
        .unwrap();
        for i in 0..40 {
            let x = [i as f64 * 0.1];
            let (m, v) = cond.latent(&base.resolve(&x).unwrap());
            let want = full.marginal(&x, false).unwrap();
            assert_abs_diff_eq!(m, want.mean, epsilon = 1e-7);
            assert_abs_diff_eq!(v, want.variance, epsilon = 1e-7);
        }
    }

    #[test]
    fn point_cache_agrees_with_direct_resolution() {
        let model = se_model(0.5, 1.3, 0.01);
        let ev = Evidence::from_noisy(vec![(vec![0.1, 0.2], 0.3), (vec![0.9, -0.4], -1.0)]);
        let pts: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64 * 0.2, 0.1]).collect();
        let plain = Posterior::new(&model, &ev).unwrap();
        let cached = plain.clone().with_point_cache(&pts).unwrap();
        let other = vec![0.33, 0.44];
        for a in &pts {
            let ra = cached.resolve(a).unwrap();
            let pa = plain.resolve(a).unwrap();
            assert_abs_diff_eq!(ra.mean, pa.mean, epsilon = 1e-12);
            assert_abs_diff_eq!(ra.variance, pa.variance, epsilon = 1e-12);
            for b in pts.iter().chain(std::iter::once(&other)) {
                let rb = cached.resolve(b).unwrap();
                let pb = plain.resolve(b).unwrap();
                assert_abs_diff_eq!(
                    cached.covariance(&ra, &rb),
                    plain.covariance(&pa, &pb),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn entropy_values() {
        assert_abs_diff_eq!(
            gaussian_entropy(1.0 / (2.0 * PI * std::f64::consts::E)).unwrap(),
            0.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            gaussian_entropy(1.0).unwrap(),
            1.4189385332046727,
            epsilon = 1e-12
        );
        for v in [1e-6, 0.3, 2.0, 1e4] {
            let d = gaussian_entropy(4.0 * v).unwrap() - gaussian_entropy(v).unwrap();
            assert_abs_diff_eq!(d, 2f64.ln(), epsilon = 1e-12);
        }
        assert!(gaussian_entropy(0.0).is_err());
        assert!(gaussian_entropy(-1.0).is_err());
    }

    #[test]
    fn dimension_mismatch_is_input_error() {
        let model = se_model(1.0, 1.0, 0.01);
        let ev = Evidence::from_noisy(vec![(vec![0.0, 0.0], 1.0)]);
        assert!(matches!(
            posterior_marginal(&model, &ev, &[0.0], true),
            Err(BaxError::Input(_))
        ));
        let bad = Evidence::from_noisy(vec![(vec![0.0], 1.0), (vec![0.0, 1.0], 1.0)]);
        assert!(Posterior::new(&model, &bad).is_err());
    }

    #[test]
    fn duplicate_noiseless_points_survive_jitter() {
        let model = se_model(1.0, 1.0, 0.0);
        let mut ev = Evidence::new();
        ev.push_noiseless(vec![0.5], 1.0);
        ev.push_noiseless(vec![0.5], 1.0);
        ev.push_noisy(vec![0.5], 1.0);
        let m = posterior_marginal(&model, &ev, &[0.5], false).unwrap();
        assert_abs_diff_eq!(m.mean, 1.0, epsilon = 1e-6);
    }
}
