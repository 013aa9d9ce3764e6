//! Experiment configs, seeded trials and recovery-rate sweeps.

mod config;
mod sweep;
mod trial;

pub use config::{Cell, ExperimentConfig, Grid, Mode};
pub use sweep::{aggregate, sweep, trial_seed, write_csv, write_output, Aggregate, SweepOutput, CSV_HEADER};
pub use trial::{run_trial, TrialOptions, TrialResult};
