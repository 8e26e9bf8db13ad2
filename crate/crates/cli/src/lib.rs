//! Library half of the `hrw` binary: configuration, CSV output, the
//! subcommands, figure presets and the validation suite.

// `!(a < b)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod commands;
pub mod config;
pub mod figures;
pub mod output;
pub mod validate;
