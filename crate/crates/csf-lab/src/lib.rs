//! Batch experiment runner for the curve shortening flow laboratory: a
//! registry of named experiments driven by flat key = value configs, each
//! writing deterministic CSV/JSON artifacts and returning a pass/fail
//! summary.

// `!(x > 0.0)`-style guards reject NaN together with the wrong sign.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod snapshots;

pub use config::{parse_config, parse_configs, ExperimentConfig};
pub use error::{LabError, Result};
pub use experiments::{find, registry, run_experiment, ExperimentSummary};
