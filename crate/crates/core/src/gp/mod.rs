//! Gaussian process prior and posterior machinery.

mod kernel;
pub(crate) mod linalg;
mod posterior;
mod sample;

pub use kernel::{kernel_eval, KernelKind, KernelSpec};
pub(crate) use posterior::point_key;
pub use posterior::{
    gaussian_entropy, posterior_marginal, Evidence, GPModel, GaussianMarginal,
    NoiselessConditioner, Posterior, ResolvedPoint,
};
pub use sample::{sample_function, sample_query, LazyFunctionSample};
