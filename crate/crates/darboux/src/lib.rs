//! Command-line front end and experiment drivers for `darboux-core`.
//!
//! The core crate does the mathematics; this crate adds configuration files,
//! seeded sampling, JSON/CSV output and parallel study runners.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod experiments;
pub mod formula;
pub mod poly_json;
pub mod sampling;

pub use config::StudyConfig;
