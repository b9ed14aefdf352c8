//! Oracle-efficient differentially private optimization by objective perturbation.
//!
//! The crate is organized bottom-up:
//!
//! - [`domain`]: datasets, losses, parameter spaces, the sphere normalization map and
//!   perturbed objectives.
//! - [`noise`]: seeded, stream-indexed Gaussian / Laplace / exponential samplers.
//! - [`oracles`]: exact minimization oracles for the 0/1-loss halfspace class
//!   (exhaustive enumeration and branch-and-bound), a closed-form oracle for linear
//!   losses over a box, and an MPS bridge for external MIP solvers.
//! - [`mechanisms`]: the discrete-space normalized mechanism (`obj_disc`), the
//!   continuous sample-average mechanism (`obj_samp`), the separator-set baseline
//!   (`rspm`), and their closed-form noise scales and utility bounds.
//! - [`audit`]: Monte-Carlo checks of the properties the privacy analysis relies on,
//!   and a pointwise empirical (ε, δ) auditor.
//! - [`harness`]: CSV ingestion, synthetic data, the experiment runner and the CLI.
//!
//! Runnable walkthroughs live in `examples/` (`cargo run -p objpert --example <name>`).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod domain;
pub mod error;
pub mod harness;
pub mod mechanisms;
pub mod noise;
pub mod oracles;

pub use error::{Error, Result};
