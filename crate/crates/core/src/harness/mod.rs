//! Experiment runner: configuration, seeded multi-trial execution, results
//! files and SVG plots.

mod config;
mod experiment;
mod output;
mod plot;

pub use config::{
    parse_config, parse_config_str, EsSettings, ExperimentConfig, GpSettings, Lengthscale, Method,
    ProblemSpec,
};
pub use experiment::{
    build_instance, execute_experiment, run_trial, Instance, ResultRow, ResultsTable, RunEntry,
    RunFailure, Scoring, SummaryPoint,
};
pub use output::{read_results, write_results, RESULTS_FILE};
pub use plot::{emit_plot, render_plot, PlotLayout};
