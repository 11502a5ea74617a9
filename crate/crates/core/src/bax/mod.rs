//! The sequential InfoBAX loop.

mod algorithm;
mod estimate;
mod run;

pub use algorithm::{Algorithm, EvolutionAlgorithm, ShortestPathAlgorithm, TopKAlgorithm};
pub use estimate::{estimate_output, medoid_index, refine_local_opt};
pub use run::{
    draw_bundle, evaluate_acquisition, optimize_acquisition, run_infobax, Acquisition,
    AcquisitionSummary, BaxConfig, CandidateSource, IterationRecord, IterationView, MetricFn,
    Problem, RunRecord,
};
