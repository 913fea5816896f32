//! Monte Carlo drivers and the reference-table harness.

pub mod instance;
pub mod report;
pub mod tables;
pub mod trials;

pub use instance::{gen_instance, InstanceSpec, ProblemInstance, RadiusMode};
pub use report::{experiment_csv, table_csv, to_json};
pub use tables::{
    reproduce_table, table_spec, CellReport, RowReport, TableReport, TableRunOptions, Tolerances, TABLE_IDS,
};
pub use trials::{run_trials, Engines, ExperimentConfig, ExperimentReport, Stat};
