use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{BaxError, Result};
use crate::gp::{Evidence, GPModel, Posterior};

/// Predictive variance of an observation at `x`.
pub fn baseline_variance(model: &GPModel, data: &Evidence, x: &[f64]) -> Result<f64> {
    Ok(Posterior::new(model, data)?.marginal(x, true)?.variance)
}

/// Information gain about the function value itself, `0.5 ln(1 + var_t(x) / noise)`.
pub fn baseline_eig_f(model: &GPModel, data: &Evidence, x: &[f64]) -> Result<f64> {
    eig_f_from_latent(
        model,
        Posterior::new(model, data)?.marginal(x, false)?.variance,
    )
}

pub(crate) fn eig_f_from_latent(model: &GPModel, latent_var: f64) -> Result<f64> {
    if model.noise_variance <= 0.0 {
        return Err(BaxError::config(
            "function information gain is unbounded without observation noise",
        ));
    }
    Ok(0.5 * (latent_var / model.noise_variance).ln_1p())
}

/// Uniformly chosen candidate index.
pub fn baseline_random(num_candidates: usize, seed: u64) -> Result<usize> {
    if num_candidates == 0 {
        return Err(BaxError::input("no candidates to choose from"));
    }
    Ok(ChaCha8Rng::seed_from_u64(seed).gen_range(0..num_candidates))
}
