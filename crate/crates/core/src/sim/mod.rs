//! Seeded Monte-Carlo experiments comparing EFDA with LDA, QDA and logistic
//! regression.
//!
//! Trials run in parallel on the current rayon pool; results are collected
//! in trial order and reduced sequentially, so tables do not depend on the
//! number of threads.

mod bench;
mod config;
mod efficiency;
mod generate;
mod table;

pub use bench::{
    evaluate, run_binary_benchmark, run_imbalance_sweep, run_multiclass_benchmark,
    run_sample_size_sweep, run_unknown_k_ablation, FittedModel,
};
pub use config::{ConfigFile, ExperimentConfig, Method, ShapeEstimator};
pub use efficiency::run_efficiency;
pub use generate::{
    draw_fixed_counts, draw_labeled, efficiency_grid, fixed_counts, generate_binary,
    generate_efficiency, generate_trial, trial_rng, GRID_STREAM,
};
pub use table::{
    BenchmarkRow, BenchmarkTable, EfficiencyRow, EfficiencyTable, EstimateRow, HeaderNames,
    TrialRow,
};
