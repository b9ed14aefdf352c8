use std::collections::BTreeMap;

use super::{sigma_objdisc, RunRecord};
use crate::domain::{dataset_loss, Dataset, Loss, PrivacyBudget};
use crate::error::{Error, Result};
use crate::noise::{gaussian_vector, RngStream};
use crate::oracles::{NormalizedOracle, OracleOutcome};

/// What to do when the oracle cannot certify its answer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExactPolicy {
    /// Fail with [`Error::InexactOracle`].
    #[default]
    Require,
    /// Return the incumbent and stamp a warning into the record.
    Warn,
}

const INEXACT_WARNING: &str = "oracle answer not certified exact; the privacy guarantee does not apply";

/// Solves the normalized problem for a given perturbation. Test hook for [`obj_disc`].
pub fn obj_disc_with_noise<L: Loss, O: NormalizedOracle<L> + ?Sized>(
    data: &Dataset<L>,
    oracle: &O,
    eta: &[f64],
    policy: ExactPolicy,
) -> Result<OracleOutcome> {
    let out = oracle.minimize_normalized(data, eta)?;
    if !out.exact && policy == ExactPolicy::Require {
        return Err(Error::InexactOracle);
    }
    Ok(out)
}

/// Objective perturbation over the oracle's discrete space.
///
/// Draws `η ~ N(0, σ²)^{d+1}` with `σ = 7 G D² √ln(1/δ) / (τ ε)` and returns the
/// minimizer of `L(D, w) − <η, π(w)>`.
pub fn obj_disc<L: Loss, O: NormalizedOracle<L> + ?Sized>(
    data: &Dataset<L>,
    oracle: &O,
    budget: PrivacyBudget,
    lipschitz: f64,
    policy: ExactPolicy,
    rng: &mut RngStream,
) -> Result<RunRecord> {
    if data.is_empty() {
        return Err(Error::invalid("data", "mechanisms need at least one example"));
    }
    let space = oracle.space();
    if data.dim() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), got: data.dim() });
    }
    let stream = rng.id();
    let sigma = sigma_objdisc(lipschitz, space.radius(), space.step(), budget.epsilon(), budget.delta())?;
    let eta = gaussian_vector(space.dim() + 1, sigma, rng)?;
    let out = obj_disc_with_noise(data, oracle, &eta, policy)?;
    let mut warnings = Vec::new();
    if !out.exact {
        warnings.push(INEXACT_WARNING.to_string());
    }
    let params = BTreeMap::from([
        ("sigma".to_string(), sigma),
        ("G".to_string(), lipschitz),
        ("tau".to_string(), space.step()),
        ("B".to_string(), space.coord_bound()),
        ("D".to_string(), space.radius()),
    ]);
    Ok(RunRecord {
        mechanism: "objdisc".into(),
        stream,
        epsilon: budget.epsilon(),
        delta: budget.delta(),
        params,
        loss: dataset_loss(data, &out.w)? / data.len() as f64,
        w: out.w,
        exact: out.exact,
        oracle_calls: 1,
        nodes_explored: out.nodes_explored,
        wall_ms: None,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{DiscreteSpace, LabeledExample};
    use crate::oracles::{BranchAndBoundOracle, ExhaustiveOracle};

    fn toy() -> Dataset<LabeledExample> {
        Dataset::new(vec![
            LabeledExample::positive(vec![1.0, 0.5]).unwrap(),
            LabeledExample::negative(vec![-1.0, 0.2]).unwrap(),
            LabeledExample::positive(vec![0.3, -1.0]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn zero_noise_gives_the_plain_minimizer() {
        let space = DiscreteSpace::halfspace_grid(2).unwrap();
        let oracle = ExhaustiveOracle::new(space.clone()).unwrap();
        let out = obj_disc_with_noise(&toy(), &oracle, &[0.0; 3], ExactPolicy::Require).unwrap();
        let best = oracle
            .points()
            .iter()
            .map(|w| dataset_loss(&toy(), w).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(dataset_loss(&toy(), &out.w).unwrap(), best);
        let first = oracle.points().iter().find(|w| dataset_loss(&toy(), w).unwrap() == best).unwrap();
        assert_eq!(&out.w, first);
    }

    #[test]
    fn replay_and_membership() {
        let space = DiscreteSpace::halfspace_grid(2).unwrap();
        let oracle = ExhaustiveOracle::new(space.clone()).unwrap();
        let budget = PrivacyBudget::new(1.0, 0.01).unwrap();
        for i in 0..20 {
            let mut rng = RngStream::new(5, i);
            let rec = obj_disc(&toy(), &oracle, budget, 1.0, ExactPolicy::Require, &mut rng).unwrap();
            assert!(space.contains(&rec.w));
            let again = obj_disc(&toy(), &oracle, budget, 1.0, ExactPolicy::Require, &mut rec.stream.open()).unwrap();
            assert_eq!(rec, again);
        }
    }

    #[test]
    fn inexact_policy() {
        let space = DiscreteSpace::new(2, 1.0, 3.0, 3.0).unwrap();
        let oracle = BranchAndBoundOracle::with_budget(space, 1);
        let budget = PrivacyBudget::new(1.0, 0.01).unwrap();
        let mut rng = RngStream::new(1, 0);
        let err = obj_disc(&toy(), &oracle, budget, 1.0, ExactPolicy::Require, &mut rng).unwrap_err();
        assert!(matches!(err, Error::InexactOracle));
        let rec = obj_disc(&toy(), &oracle, budget, 1.0, ExactPolicy::Warn, &mut RngStream::new(1, 0)).unwrap();
        assert!(!rec.exact);
        assert_eq!(rec.warnings.len(), 1);
    }
}
