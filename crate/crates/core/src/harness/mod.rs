//! Experiment orchestration: configuration, per-cell runs with separate
//! train/test timing, JSONL persistence, hardware-time estimates, scaling
//! fits and CSV reports.

mod artifact;
mod config;
mod hardware;
mod report;
mod run;

pub use artifact::{TrainedArtifact, TrainedModel};
pub use config::{DatasetSpec, ExperimentConfig, Method};
pub use hardware::{
    estimate_hardware_seconds, scaling_fit, seconds_to_years, symmetric_shot_count, DEFAULT_SHOT_RATE_HZ,
    SECONDS_PER_YEAR,
};
pub use report::{read_results, report, summarize, Summary};
pub use run::{prepare_cell, run_cell, run_experiment, Cell, CellData, DataCache, RunResult};
