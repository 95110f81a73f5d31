//! Experiment runner for the floe simulator: TOML configs, presets, run
//! directories and validation suites.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifacts;
pub mod config;
pub mod experiment;
pub mod pipeline;
pub mod scenarios;
pub mod validate;
