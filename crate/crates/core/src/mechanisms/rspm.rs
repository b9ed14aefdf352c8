use std::collections::BTreeMap;

use super::{sigma_rspm, RunRecord, SeparatorSet};
use crate::domain::{dataset_loss, Dataset, LabeledExample, PrivacyBudget, WeightedDataset};
use crate::error::{Error, Result};
use crate::noise::{gaussian_vector, RngStream};
use crate::oracles::{OracleOutcome, WeightedOracle};

/// Weighted minimizer of `{(l_i, 1)} ∪ {(probe_k, η_k)}`. Test hook for [`rspm`].
pub fn rspm_with_noise<O: WeightedOracle<LabeledExample> + ?Sized>(
    data: &Dataset<LabeledExample>,
    sep: &SeparatorSet,
    oracle: &O,
    eta: &[f64],
) -> Result<OracleOutcome> {
    if eta.len() != sep.len() {
        return Err(Error::DimensionMismatch { expected: sep.len(), got: eta.len() });
    }
    let mut wd = WeightedDataset::unit(data);
    for (probe, &p) in sep.probes().iter().zip(eta) {
        wd.push(probe.clone(), p)?;
    }
    oracle.minimize_weighted(&wd)
}

/// Report-separator-perturbed-minimum with Gaussian weights `N(0, σ²)`,
/// `σ = 7 √(m ln(1/δ)) / ε`.
pub fn rspm<O: WeightedOracle<LabeledExample> + ?Sized>(
    data: &Dataset<LabeledExample>,
    sep: &SeparatorSet,
    oracle: &O,
    budget: PrivacyBudget,
    rng: &mut RngStream,
) -> Result<RunRecord> {
    if data.is_empty() {
        return Err(Error::invalid("data", "mechanisms need at least one example"));
    }
    if data.dim() != sep.dim() {
        return Err(Error::DimensionMismatch { expected: sep.dim(), got: data.dim() });
    }
    let stream = rng.id();
    let sigma = sigma_rspm(sep.len(), budget.epsilon(), budget.delta())?;
    let eta = gaussian_vector(sep.len(), sigma, rng)?;
    let out = rspm_with_noise(data, sep, oracle, &eta)?;
    Ok(RunRecord {
        mechanism: "rspm".into(),
        stream,
        epsilon: budget.epsilon(),
        delta: budget.delta(),
        params: BTreeMap::from([("sigma".to_string(), sigma), ("m_sep".to_string(), sep.len() as f64)]),
        loss: dataset_loss(data, &out.w)? / data.len() as f64,
        w: out.w,
        exact: out.exact,
        oracle_calls: 1,
        nodes_explored: out.nodes_explored,
        wall_ms: None,
        warnings: Vec::new(),
    })
}
