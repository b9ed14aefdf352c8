use super::{LinearOracle, NormalizedOracle, OracleOutcome, WeightedOracle};
use crate::domain::objective_internals::{loss_sum, weighted_sum};
use crate::domain::{
    dot, project, Dataset, DiscreteSpace, Loss, WeightedDataset, DEFAULT_ENUMERATION_CAP,
};
use crate::error::{Error, Result};

/// Ground-truth oracle: scans every member of a discrete space.
///
/// Points and their sphere lifts are materialized once, so repeated calls on the same
/// space (as in Monte-Carlo audits) only pay for loss evaluation.
#[derive(Clone, Debug)]
pub struct ExhaustiveOracle {
    space: DiscreteSpace,
    points: Vec<Vec<f64>>,
    lifted: Vec<Vec<f64>>,
}

impl ExhaustiveOracle {
    pub fn new(space: DiscreteSpace) -> Result<Self> {
        Self::with_cap(space, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(space: DiscreteSpace, cap: u64) -> Result<Self> {
        let points = space.points(cap)?;
        let lifted = points
            .iter()
            .map(|w| project(w, space.radius()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { space, points, lifted })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn space(&self) -> &DiscreteSpace {
        &self.space
    }

    fn check(&self, data_dim: usize, eta_len: usize, eta_want: usize) -> Result<()> {
        if data_dim != self.space.dim() {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), got: data_dim });
        }
        if eta_len != eta_want {
            return Err(Error::DimensionMismatch { expected: eta_want, got: eta_len });
        }
        Ok(())
    }

    /// Objective `L(D, w) − <η, π(w)>` at every point, in enumeration order.
    pub fn normalized_values<L: Loss>(&self, data: &Dataset<L>, eta: &[f64]) -> Result<Vec<f64>> {
        self.check(data.dim(), eta.len(), self.space.dim() + 1)?;
        Ok(self
            .points
            .iter()
            .zip(&self.lifted)
            .map(|(w, lift)| loss_sum(data.items(), w) - dot(eta, lift))
            .collect())
    }

    /// Objective `L(D, w) − <η, w>` at every point, in enumeration order.
    pub fn linear_values<L: Loss>(&self, data: &Dataset<L>, eta: &[f64]) -> Result<Vec<f64>> {
        self.check(data.dim(), eta.len(), self.space.dim())?;
        Ok(self.points.iter().map(|w| loss_sum(data.items(), w) - dot(eta, w)).collect())
    }

    pub fn weighted_values<L: Loss>(&self, data: &WeightedDataset<L>) -> Result<Vec<f64>> {
        self.check(data.dim(), 0, 0)?;
        Ok(self.points.iter().map(|w| weighted_sum(data.items(), w)).collect())
    }

    fn best(&self, values: &[f64]) -> OracleOutcome {
        // strict comparison keeps the first (lexicographically smallest) minimizer
        let mut best = 0;
        for (i, v) in values.iter().enumerate().skip(1) {
            if *v < values[best] {
                best = i;
            }
        }
        OracleOutcome {
            w: self.points[best].clone(),
            value: values[best],
            exact: true,
            nodes_explored: values.len() as u64,
        }
    }
}

impl<L: Loss> NormalizedOracle<L> for ExhaustiveOracle {
    fn space(&self) -> &DiscreteSpace {
        &self.space
    }

    fn minimize_normalized(&self, data: &Dataset<L>, eta: &[f64]) -> Result<OracleOutcome> {
        Ok(self.best(&self.normalized_values(data, eta)?))
    }
}

impl<L: Loss> LinearOracle<L> for ExhaustiveOracle {
    fn minimize_linear(&self, data: &Dataset<L>, eta: &[f64]) -> Result<OracleOutcome> {
        Ok(self.best(&self.linear_values(data, eta)?))
    }
}

impl<L: Loss> WeightedOracle<L> for ExhaustiveOracle {
    fn minimize_weighted(&self, data: &WeightedDataset<L>) -> Result<OracleOutcome> {
        Ok(self.best(&self.weighted_values(data)?))
    }
}

/// Exact minimizer of `L(D, w) − <η, π(w)>` over `space` by enumeration.
pub fn exhaustive_normalized<L: Loss>(
    data: &Dataset<L>,
    eta: &[f64],
    space: &DiscreteSpace,
) -> Result<OracleOutcome> {
    ExhaustiveOracle::new(space.clone())?.minimize_normalized(data, eta)
}

/// Exact minimizer of `L(D, w) − <η, w>` over `space` by enumeration.
pub fn exhaustive_linear<L: Loss>(
    data: &Dataset<L>,
    eta: &[f64],
    space: &DiscreteSpace,
) -> Result<OracleOutcome> {
    ExhaustiveOracle::new(space.clone())?.minimize_linear(data, eta)
}

/// Exact minimizer of `Σ p_i l_i(w)` over `space` by enumeration.
pub fn exhaustive_weighted<L: Loss>(
    data: &WeightedDataset<L>,
    space: &DiscreteSpace,
) -> Result<OracleOutcome> {
    ExhaustiveOracle::new(space.clone())?.minimize_weighted(data)
}
