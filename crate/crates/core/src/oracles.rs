//! Optimization oracles.
//!
//! Three oracle contracts are used by the mechanisms:
//!
//! - [`LinearOracle`]: returns a minimizer of `L(D, w) − <η, w>`.
//! - [`NormalizedOracle`]: returns a minimizer of `L(D, w) − <η, π(w)>` over a discrete
//!   space, where `π` is the sphere lift of [`crate::domain::project`].
//! - [`WeightedOracle`]: returns a minimizer of `Σ p_i l_i(w)` for real weights `p_i`.
//!
//! Reported objective values are unnormalized (the `1/n` factor does not move the argmin).
//! Exact implementations break ties toward the lexicographically smallest minimizer.

mod bnb;
mod box_linear;
mod exhaustive;
mod mip;
pub mod mps;

use serde::{Deserialize, Serialize};

use crate::domain::{Dataset, DiscreteSpace, WeightedDataset};
use crate::error::Result;

pub use bnb::{bnb_solve, BranchAndBound, BranchAndBoundOracle, DEFAULT_NODE_BUDGET};
pub use box_linear::BoxLinearOracle;
pub use exhaustive::{exhaustive_linear, exhaustive_normalized, exhaustive_weighted, ExhaustiveOracle};
pub use mip::{MipInstance, MipMode};

/// Result of one oracle call.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub w: Vec<f64>,
    pub value: f64,
    /// `true` when `value` is certified to be the global minimum.
    pub exact: bool,
    /// Search nodes visited; zero for oracles that do not search.
    pub nodes_explored: u64,
}

pub trait LinearOracle<L> {
    fn minimize_linear(&self, data: &Dataset<L>, eta: &[f64]) -> Result<OracleOutcome>;
}

pub trait NormalizedOracle<L> {
    fn space(&self) -> &DiscreteSpace;

    fn minimize_normalized(&self, data: &Dataset<L>, eta: &[f64]) -> Result<OracleOutcome>;
}

pub trait WeightedOracle<L> {
    fn minimize_weighted(&self, data: &WeightedDataset<L>) -> Result<OracleOutcome>;
}
