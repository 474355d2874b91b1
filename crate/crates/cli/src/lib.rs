//! Staged pipeline around the `phylotriple` library: configuration, stage
//! runners, artifact files, run reports and simulation experiments.

pub mod config;
pub mod experiment;
pub mod pipeline;
pub mod report;
pub mod run;

pub use config::{BootstrapSpec, PipelineConfig, SolverChoice, StageOptions};
pub use experiment::{experiment_tsv, median, run_experiment, run_replicate, ExperimentGrid, ExperimentRow};
pub use pipeline::{reconstruct, Reconstruction};
pub use report::{RunReport, StageTimings};
pub use run::run_pipeline;
