//! Repeated random-split experiments over extractor + classifier pipelines.
//!
//! For repeat `r` the dataset is split with seed `base_seed + r`, the
//! extractor is fitted on the training half, both halves are transformed,
//! the classifier is trained on the training features and the recognition
//! rate is the fraction of all test samples classified correctly. Repeats
//! are independent and run in parallel; results are collected in repeat
//! order, so a configuration always produces the same report.
//!
//! SVM parameters set to `auto` are chosen per (k_train, method) by a coarse
//! grid search on separate calibration splits (see
//! [`experiment::resolve_svm_params`]) and recorded in the report.

pub mod boundary;
pub mod config;
pub mod experiment;
pub mod report;
pub mod sweep;

pub use boundary::{boundary_grid, emit_boundary_grid, BoundaryOutput, GridPoint};
pub use config::{
    BoundaryConfig, ClassifierKind, CostChoice, DataSource, ExperimentConfig, ExtractorKind,
    Method, SvmKernelChoice,
};
pub use experiment::{
    fit_pipeline, run_experiment, run_experiment_on, Cell, Pipeline, Report, SvmParams,
};
pub use sweep::{sweep_m, sweep_sigma, CurvePoint};
