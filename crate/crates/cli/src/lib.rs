//! Library half of the `ibm-exit` binary: configuration, experiment
//! execution, output formats, and the acceptance suite. Kept as a library so
//! the integration tests can drive the same code paths the binary uses.

// Config validation uses `!(x > 0.0)` so that NaN fails along with the
// out-of-range values; the `partial_cmp` rewrite clippy suggests hides that.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod output;
pub mod run;
