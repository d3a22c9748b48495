//! Experiment runner: TOML configs in, convergence tables out.
//!
//! A config names one experiment kind, a symbol, an index-set family with a
//! size schedule, and a tolerance. [`run`] evaluates every schedule point and
//! returns a [`Report`] whose records are emitted as CSV or JSON.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{ExperimentConfig, ExperimentKind, Format};
pub use error::{CliError, Result};
pub use experiments::{run, ExperimentRecord, Report, RunOptions, Verdict};
