//! Acquisition functions: expected information gain about an algorithm's
//! execution path or output, plus simple baselines.
//!
//! All information-gain quantities are in nats and are evaluated against one
//! shared [`SampleBundle`] of posterior algorithm runs.

mod baselines;
mod bundle;
mod eig;

pub(crate) use baselines::eig_f_from_latent;
pub use baselines::{baseline_eig_f, baseline_random, baseline_variance};
pub use bundle::{select_delta, AbcPolicy, BundleDraw, OutputDistance, SampleBundle};
pub use eig::{
    eig_execpath, eig_output, eig_subsequence, mixture_entropy, ConditionedBundle, OutputEig,
};
