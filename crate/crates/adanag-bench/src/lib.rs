//! LIBSVM ingestion, experiment orchestration and CSV/SVG output for
//! `adanag-core`. The `adanag-bench` binary wraps [`experiment::run_experiment`].

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod certify;
pub mod clock;
pub mod config;
pub mod error;
pub mod experiment;
pub mod libsvm;
pub mod output;
pub mod plot;
pub mod problem;
pub mod registry;

pub use error::{BenchError, Result};
