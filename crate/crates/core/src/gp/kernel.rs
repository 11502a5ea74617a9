use serde::{Deserialize, Serialize};

use crate::error::{BaxError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    SquaredExponential,
    Matern52,
}

/// Stationary covariance function with per-dimension (or isotropic) lengthscales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    /// Either one entry (isotropic) or one per input dimension.
    pub lengthscale: Vec<f64>,
    pub signal_variance: f64,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, lengthscale: Vec<f64>, signal_variance: f64) -> Result<Self> {
        let spec = KernelSpec {
            kind,
            lengthscale,
            signal_variance,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn squared_exponential(lengthscale: f64, signal_variance: f64) -> Result<Self> {
        Self::new(
            KernelKind::SquaredExponential,
            vec![lengthscale],
            signal_variance,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.lengthscale.is_empty() {
            return Err(BaxError::input("kernel needs at least one lengthscale"));
        }
        if let Some(l) = self
            .lengthscale
            .iter()
            .find(|l| !(**l > 0.0) || !l.is_finite())
        {
            return Err(BaxError::input(format!(
                "lengthscale must be positive, got {l}"
            )));
        }
        if !(self.signal_variance > 0.0) || !self.signal_variance.is_finite() {
            return Err(BaxError::input(format!(
                "signal variance must be positive, got {}",
                self.signal_variance
            )));
        }
        Ok(())
    }

    fn lengthscale_at(&self, i: usize) -> f64 {
        if self.lengthscale.len() == 1 {
            self.lengthscale[0]
        } else {
            self.lengthscale[i]
        }
    }

    /// Checks that `dim` is compatible with the lengthscale vector.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.lengthscale.len() != 1 && self.lengthscale.len() != dim {
            return Err(BaxError::input(format!(
                "kernel has {} lengthscales but inputs have dimension {dim}",
                self.lengthscale.len()
            )));
        }
        Ok(())
    }

    /// Unchecked evaluation; callers guarantee matching dimensions.
    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64], x2: &[f64]) -> f64 {
        let mut r2 = 0.0;
        for (i, (a, b)) in x.iter().zip(x2).enumerate() {
            let d = (a - b) / self.lengthscale_at(i);
            r2 += d * d;
        }
        match self.kind {
            KernelKind::SquaredExponential => self.signal_variance * (-0.5 * r2).exp(),
            KernelKind::Matern52 => {
                let r = (5.0 * r2).sqrt();
                self.signal_variance * (1.0 + r + r * r / 3.0) * (-r).exp()
            }
        }
    }
}

/// Covariance between two inputs.
pub fn kernel_eval(kernel: &KernelSpec, x: &[f64], x2: &[f64]) -> Result<f64> {
    if x.len() != x2.len() {
        return Err(BaxError::input(format!(
            "kernel inputs differ in dimension: {} vs {}",
            x.len(),
            x2.len()
        )));
    }
    kernel.check_dim(x.len())?;
    Ok(kernel.eval_unchecked(x, x2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_distance_gives_signal_variance() {
        let k = KernelSpec::squared_exponential(0.7, 2.5).unwrap();
        assert_eq!(kernel_eval(&k, &[1.0, -3.0], &[1.0, -3.0]).unwrap(), 2.5);
        let m = KernelSpec::new(KernelKind::Matern52, vec![0.3, 2.0], 1.5).unwrap();
        assert_eq!(kernel_eval(&m, &[0.2, 0.1], &[0.2, 0.1]).unwrap(), 1.5);
    }

    #[test]
    fn se_squared_distance_two() {
        let k = KernelSpec::squared_exponential(1.0, 1.0).unwrap();
        // |x - x2|^2 = 1 + 1 = 2, exp(-2 / 2)
        let v = kernel_eval(&k, &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(v, (-1.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn matern_decays_to_zero() {
        let k = KernelSpec::new(KernelKind::Matern52, vec![1.0], 1.0).unwrap();
        let far = kernel_eval(&k, &[0.0], &[1e3]).unwrap();
        assert!(far < 1e-100);
        let near = kernel_eval(&k, &[0.0], &[0.5]).unwrap();
        let nearer = kernel_eval(&k, &[0.0], &[0.25]).unwrap();
        assert!(nearer > near && near > far);
    }

    #[test]
    fn symmetric() {
        let k = KernelSpec::new(KernelKind::Matern52, vec![0.5, 1.5], 3.0).unwrap();
        let a = [0.1, 0.9];
        let b = [-1.2, 0.4];
        assert_eq!(
            kernel_eval(&k, &a, &b).unwrap(),
            kernel_eval(&k, &b, &a).unwrap()
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        let k = KernelSpec::squared_exponential(1.0, 1.0).unwrap();
        assert!(matches!(
            kernel_eval(&k, &[0.0], &[0.0, 1.0]),
            Err(BaxError::Input(_))
        ));
        assert!(KernelSpec::squared_exponential(0.0, 1.0).is_err());
        assert!(KernelSpec::squared_exponential(1.0, -1.0).is_err());
        let ard = KernelSpec::new(KernelKind::SquaredExponential, vec![1.0, 2.0], 1.0).unwrap();
        assert!(kernel_eval(&ard, &[0.0; 3], &[1.0; 3]).is_err());
    }
}
