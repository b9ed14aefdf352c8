use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{ObjSampParams, RunRecord};
use crate::domain::{dataset_loss, ContinuousSpace, Dataset, Loss, PrivacyBudget};
use crate::error::{Error, Result};
use crate::noise::{exponential_vector, laplace_vector, RngStream};
use crate::oracles::LinearOracle;

/// An ObjSamp run with its intermediates.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjSampRun {
    pub record: RunRecord,
    pub params: ObjSampParams,
    /// The `m` oracle answers, in draw order.
    pub oracle_outputs: Vec<Vec<f64>>,
    pub average: Vec<f64>,
    pub mu: Vec<f64>,
}

fn mean(rows: &[Vec<f64>], dim: usize) -> Vec<f64> {
    let mut acc = vec![0.0; dim];
    for row in rows {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    let m = rows.len() as f64;
    acc.iter().map(|a| a / m).collect()
}

/// Runs the oracle once per perturbation and returns `(answers, average + μ)`.
pub fn obj_samp_with_noise<L, O>(
    data: &Dataset<L>,
    oracle: &O,
    etas: &[Vec<f64>],
    mu: &[f64],
) -> Result<(Vec<Vec<f64>>, Vec<f64>)>
where
    L: Loss,
    O: LinearOracle<L> + ?Sized,
{
    if etas.is_empty() {
        return Err(Error::invalid("etas", "need at least one perturbation"));
    }
    let outputs = etas
        .iter()
        .map(|eta| oracle.minimize_linear(data, eta).map(|o| o.w))
        .collect::<Result<Vec<_>>>()?;
    let avg = mean(&outputs, data.dim());
    if mu.len() != avg.len() {
        return Err(Error::DimensionMismatch { expected: avg.len(), got: mu.len() });
    }
    let out = avg.iter().zip(mu).map(|(a, b)| a + b).collect();
    Ok((outputs, out))
}

/// Sample-average objective perturbation over a box.
///
/// Losses should take values in `[0, 1]` and be `G`-Lipschitz in ℓ1. Perturbation `k` is
/// drawn from `rng.child(k)`, so the oracle calls run in parallel without changing the
/// result. The Laplace draw uses `rng` itself. The output is not projected back to the box.
#[allow(clippy::too_many_arguments)]
pub fn obj_samp<L, O>(
    data: &Dataset<L>,
    space: &ContinuousSpace,
    oracle: &O,
    budget: PrivacyBudget,
    lipschitz: f64,
    beta: f64,
    alpha: f64,
    rng: &mut RngStream,
) -> Result<ObjSampRun>
where
    L: Loss + Sync,
    O: LinearOracle<L> + Sync + ?Sized,
{
    if data.is_empty() {
        return Err(Error::invalid("data", "mechanisms need at least one example"));
    }
    let d = space.dim();
    if data.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: data.dim() });
    }
    let stream = rng.id();
    let params = ObjSampParams::new(
        d,
        data.len(),
        space.diameter_l2(),
        space.diameter_linf(),
        lipschitz,
        budget,
        beta,
        alpha,
    )?;
    let answers = (0..params.m)
        .into_par_iter()
        .map(|k| {
            let eta = exponential_vector(d, params.sigma, &mut rng.child(k))?;
            let out = oracle.minimize_linear(data, &eta)?;
            Ok((out.w, out.exact, out.nodes_explored))
        })
        .collect::<Result<Vec<_>>>()?;
    let exact = answers.iter().all(|a| a.1);
    let nodes = answers.iter().map(|a| a.2).sum();
    let oracle_outputs: Vec<Vec<f64>> = answers.into_iter().map(|a| a.0).collect();
    let average = mean(&oracle_outputs, d);
    let mu = laplace_vector(d, params.lambda / budget.epsilon(), rng)?;
    let w: Vec<f64> = average.iter().zip(&mu).map(|(a, b)| a + b).collect();
    let record = RunRecord {
        mechanism: "objsamp".into(),
        stream,
        epsilon: budget.epsilon(),
        delta: budget.delta(),
        params: BTreeMap::from([
            ("gamma".to_string(), params.gamma),
            ("m".to_string(), params.m as f64),
            ("sigma".to_string(), params.sigma),
            ("lambda".to_string(), params.lambda),
            ("beta".to_string(), beta),
            ("alpha".to_string(), alpha),
            ("G".to_string(), lipschitz),
        ]),
        loss: dataset_loss(data, &w)? / data.len() as f64,
        w,
        exact,
        oracle_calls: params.m,
        nodes_explored: nodes,
        wall_ms: None,
        warnings: Vec::new(),
    };
    Ok(ObjSampRun { record, params, oracle_outputs, average, mu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::LinearLoss;
    use crate::oracles::BoxLinearOracle;

    fn data() -> Dataset<LinearLoss> {
        Dataset::new(vec![
            LinearLoss::new(vec![0.2, -0.1], 0.5).unwrap(),
            LinearLoss::new(vec![-0.3, -0.2], 0.5).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn noiseless_single_call_hits_the_vertex() {
        let space = ContinuousSpace::cube(2, -1.0, 1.0).unwrap();
        let oracle = BoxLinearOracle::new(space);
        let (outs, w) = obj_samp_with_noise(&data(), &oracle, &[vec![0.0, 0.0]], &[0.0, 0.0]).unwrap();
        // slopes −0.1 and −0.3 push both coordinates to the upper face
        assert_eq!(w, vec![1.0, 1.0]);
        assert_eq!(outs, vec![vec![1.0, 1.0]]);
    }

    #[test]
    fn decomposition_and_replay() {
        let space = ContinuousSpace::cube(1, 0.0, 1.0).unwrap();
        let oracle = BoxLinearOracle::new(space.clone());
        let items: Vec<LinearLoss> = (0..4000)
            .map(|i| LinearLoss::new(vec![if i % 2 == 0 { 0.01 } else { -0.01 }], 0.5).unwrap())
            .collect();
        let data = Dataset::new(items).unwrap();
        let budget = PrivacyBudget::new(1.0, 0.1).unwrap();
        let mut rng = RngStream::new(3, 0);
        let run = obj_samp(&data, &space, &oracle, budget, 0.01, 0.05, 0.0, &mut rng).unwrap();
        assert_eq!(run.oracle_outputs.len() as u64, run.params.m);
        let avg = run.oracle_outputs.iter().map(|w| w[0]).sum::<f64>() / run.params.m as f64;
        assert!((run.record.w[0] - run.mu[0] - avg).abs() < 1e-12);
        let again = obj_samp(&data, &space, &oracle, budget, 0.01, 0.05, 0.0, &mut run.record.stream.open()).unwrap();
        assert_eq!(run, again);
    }

    #[test]
    fn gamma_above_one_propagates() {
        let space = ContinuousSpace::cube(2, -1.0, 1.0).unwrap();
        let oracle = BoxLinearOracle::new(space.clone());
        let budget = PrivacyBudget::new(5.0, 0.1).unwrap();
        let err = obj_samp(&data(), &space, &oracle, budget, 1.0, 0.05, 0.0, &mut RngStream::new(0, 0)).unwrap_err();
        assert!(matches!(err, Error::GammaTooLarge { .. }));
    }
}
