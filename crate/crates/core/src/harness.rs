//! Data loading, synthetic data, the experiment runner and the command line.

pub mod cli;
mod config;
mod experiment;
mod ingest;
mod synth;

pub use config::{parse_config, DeltaRule, ExperimentConfig, MechanismKind, OracleKind};
pub use experiment::{
    compute, run_experiment, AnyOracle, BoundRow, ExperimentResults, Meta, RunLine, SummaryRow,
};
pub use ingest::{balance, class_counts, dataset_csv_spec, ingest_csv, write_dataset, write_dataset_csv, IngestSpec, Ingested};
pub use synth::{synth_halfspace, Synth};
