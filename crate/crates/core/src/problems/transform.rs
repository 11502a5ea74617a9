use serde::{Deserialize, Serialize};

use crate::error::{BaxError, Result};

/// `ln(1 + e^u)`, computed without overflow.
pub fn softplus(u: f64) -> f64 {
    if u > 30.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

/// `ln(e^c - 1)` for `c > 0`.
pub fn inverse_softplus(c: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(BaxError::input(format!(
            "inverse softplus needs a positive cost, got {c}"
        )));
    }
    if c > 30.0 {
        Ok(c + (-(-c).exp()).ln_1p())
    } else {
        Ok(c.exp_m1().ln())
    }
}

/// Maps raw costs into `(0, inf)` and back into an unconstrained modeling space.
///
/// Raw costs are first divided by `scale` and shifted by `offset`; the
/// modeling space is the inverse softplus of the result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityTransform {
    pub scale: f64,
    pub offset: f64,
}

impl Default for PositivityTransform {
    fn default() -> Self {
        PositivityTransform {
            scale: 1.0,
            offset: 0.0,
        }
    }
}

impl PositivityTransform {
    /// Normalizes by the largest raw cost and adds a 0.1 offset.
    pub fn max_normalized(raw_costs: impl IntoIterator<Item = f64>) -> Result<Self> {
        let max = raw_costs.into_iter().fold(f64::NEG_INFINITY, f64::max);
        if !(max > 0.0) || !max.is_finite() {
            return Err(BaxError::input(
                "max-normalization needs a positive finite maximum cost",
            ));
        }
        Ok(PositivityTransform {
            scale: max,
            offset: 0.1,
        })
    }

    pub fn rescale(&self, raw: f64) -> f64 {
        raw / self.scale + self.offset
    }

    /// Raw cost to modeling space.
    pub fn to_model(&self, raw: f64) -> Result<f64> {
        inverse_softplus(self.rescale(raw))
    }

    /// Modeling space to a (rescaled) positive cost.
    pub fn to_cost(&self, g: f64) -> f64 {
        softplus(g)
    }
}

/// Wraps a modeling-space function so that it returns strictly positive costs.
pub fn wrap_positive_cost<G>(mut g: G) -> impl FnMut(&[f64]) -> Result<f64>
where
    G: FnMut(&[f64]) -> Result<f64>,
{
    move |x| g(x).map(softplus)
}
