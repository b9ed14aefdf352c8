use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::noise::StreamId;

/// One mechanism execution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub mechanism: String,
    /// Stream the mechanism drew from; `stream.open()` replays the run.
    pub stream: StreamId,
    pub epsilon: f64,
    pub delta: f64,
    /// Derived noise scales and other settings, by name.
    pub params: BTreeMap<String, f64>,
    pub w: Vec<f64>,
    /// `L(D, w) / n`.
    pub loss: f64,
    /// Every oracle call was certified exact.
    pub exact: bool,
    pub oracle_calls: u64,
    pub nodes_explored: u64,
    /// Filled by the caller when timing is wanted.
    pub wall_ms: Option<f64>,
    pub warnings: Vec<String>,
}
