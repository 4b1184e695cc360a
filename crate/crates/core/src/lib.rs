//! Numerics for lifetime (exit-time) asymptotics of iterated Brownian motion
//! and Brownian-time Brownian motion on intervals and boxes.
//!
//! The library is organized around the pipeline
//!
//! spectra  ->  exit_laws  ->  subordination / montecarlo
//!                 |
//! laplace  ->  predictors <-  tauberian
//!
//! All processes use the generator (1/2)Δ throughout: the principal Dirichlet
//! eigenvalue of the unit interval is π²/2, and first-exit of standard
//! Brownian motion from (0,1) started at x has mean x(1−x).

// Validation guards are written `!(x > 0.0)` so that NaN fails along with the
// out-of-range values; the `partial_cmp` rewrite clippy suggests hides that.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature node tables and reference constants keep more digits than f64
// resolves; the extra digits document the true values.
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod exit_laws;
pub mod laplace;
pub mod montecarlo;
pub mod predictors;
pub mod quad;
pub mod spectra;
pub mod special;
pub mod subordination;
pub mod tauberian;

pub use error::Error;
pub use quad::Estimate;
