//! Experiment configs, runs and their output files.

mod config;
mod output;
mod runs;

pub use config::ExperimentConfig;
pub use output::{write_json, write_sample, RowWriter};
pub use runs::{
    as_track, compare_samples, prepare, run_as_convergence, run_assumption_report, run_convergence,
    run_limit, run_matched_law, run_simulate, sample_matched, tail_sup_deviation, trend_violations,
    AsPoint, AsSummary, AssumptionSummary, ConvergenceSummary, DistanceRow, MatchedSummary,
    Prepared, SampleSummary, DISTANCE_COLUMNS,
};
