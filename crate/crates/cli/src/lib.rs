//! Experiment runner: configuration, single runs, sweeps with CSV output,
//! the invariant suite and transmission tables.

pub mod config;
pub mod experiment;
pub mod plotmap;
pub mod tables;
pub mod verify;

pub use config::{ConfigError, ExperimentConfig, Mode, RunSpec, ScheduleMode, Settings, Sweep, SweepAxis};
pub use experiment::{csv_string, run_single, run_sweep, run_trial, write_csv, ResultRow, TrialResult};
pub use verify::{verify, Check, Fault, Status, VerifyOptions, VerifyReport};
