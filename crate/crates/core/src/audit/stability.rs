use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{clopper_pearson, Verdict, CONFIDENCE_ALPHA};
use crate::domain::{Dataset, Loss};
use crate::error::{Error, Result};
use crate::noise::{exponential_vector, RngStream};
use crate::oracles::LinearOracle;

/// A Monte-Carlo mean with a 3-standard-error half-width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub sd: f64,
    pub half_width: f64,
    pub trials: u64,
}

impl Estimate {
    fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        let sd = var.sqrt();
        Self { mean, sd, half_width: 3.0 * sd / n.sqrt(), trials: xs.len() as u64 }
    }

    pub fn upper(&self) -> f64 {
        self.mean + self.half_width
    }
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Coupled estimate of `E_η ‖O(D, η) − O(D′, η)‖₁` with `η ~ Exp(rate)^d`.
///
/// Trial `t` draws its `η` from `rng.child(t)` and feeds it to both datasets.
pub fn estimate_stability<L, O>(
    data: &Dataset<L>,
    neighbor: &Dataset<L>,
    oracle: &O,
    rate: f64,
    trials: u64,
    rng: &RngStream,
) -> Result<Estimate>
where
    L: Loss + PartialEq + Sync,
    O: LinearOracle<L> + Sync + ?Sized,
{
    if trials == 0 {
        return Err(Error::invalid("trials", "must be positive"));
    }
    data.differing_index(neighbor)?;
    let d = data.dim();
    let dists = (0..trials)
        .into_par_iter()
        .map(|t| {
            let eta = exponential_vector(d, rate, &mut rng.child(t))?;
            let a = oracle.minimize_linear(data, &eta)?.w;
            let b = oracle.minimize_linear(neighbor, &eta)?.w;
            Ok(l1(&a, &b))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Estimate::from_samples(&dists))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub m: u64,
    pub repeats: u64,
    /// Repeats whose average strayed more than `2 D∞ γ` (ℓ1) from the mean estimate.
    pub failures: u64,
    pub threshold: f64,
    /// `δ / 2`.
    pub allowed_rate: f64,
    pub worst_deviation: f64,
    pub verdict: Verdict,
}

/// Checks that averages of `m = ⌈ln(2d/δ)/(2γ²)⌉` oracle answers stay within `2 D∞ γ` of
/// the mean answer except with probability `δ/2`.
///
/// The mean is estimated from `10m` extra calls. Repeat `r` uses `rng.child(r)`; the mean
/// estimate uses `rng.child(repeats)`. When the total number of calls would exceed
/// `max_calls` nothing runs and the verdict is inconclusive. The verdict fails only when
/// the Clopper–Pearson lower bound on the failure rate exceeds `δ/2`.
#[allow(clippy::too_many_arguments)]
pub fn check_concentration<L, O>(
    data: &Dataset<L>,
    oracle: &O,
    rate: f64,
    gamma: f64,
    delta: f64,
    diameter_linf: f64,
    repeats: u64,
    max_calls: u64,
    rng: &RngStream,
) -> Result<ConcentrationReport>
where
    L: Loss + Sync,
    O: LinearOracle<L> + Sync + ?Sized,
{
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::invalid("gamma", format!("must lie in (0, 1], got {gamma}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta", "must lie in (0, 1)"));
    }
    if repeats == 0 {
        return Err(Error::invalid("repeats", "must be positive"));
    }
    let d = data.dim();
    let m_real = (2.0 * d as f64 / delta).ln() / (2.0 * gamma * gamma);
    let threshold = 2.0 * diameter_linf * gamma;
    let allowed_rate = delta / 2.0;
    let mut report = ConcentrationReport {
        m: 0,
        repeats,
        failures: 0,
        threshold,
        allowed_rate,
        worst_deviation: 0.0,
        verdict: Verdict::Inconclusive,
    };
    let calls = m_real.ceil() * (repeats as f64 + 10.0);
    if !(calls <= max_calls as f64) {
        return Ok(report);
    }
    let m = m_real.ceil() as u64;
    report.m = m;
    let average = |stream: RngStream, count: u64| -> Result<Vec<f64>> {
        let outs = (0..count)
            .into_par_iter()
            .map(|k| {
                let eta = exponential_vector(d, rate, &mut stream.child(k))?;
                Ok(oracle.minimize_linear(data, &eta)?.w)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut acc = vec![0.0; d];
        for w in &outs {
            for (a, v) in acc.iter_mut().zip(w) {
                *a += v;
            }
        }
        Ok(acc.into_iter().map(|a| a / count as f64).collect())
    };
    let mean = average(rng.child(repeats), 10 * m)?;
    for r in 0..repeats {
        let dev = l1(&average(rng.child(r), m)?, &mean);
        report.worst_deviation = report.worst_deviation.max(dev);
        if dev > threshold {
            report.failures += 1;
        }
    }
    let (lower, _) = clopper_pearson(report.failures, repeats, CONFIDENCE_ALPHA);
    report.verdict = if lower > allowed_rate { Verdict::Fail } else { Verdict::Pass };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{ContinuousSpace, LinearLoss};
    use crate::oracles::{BoxLinearOracle, OracleOutcome};

    struct Constant;

    impl LinearOracle<LinearLoss> for Constant {
        fn minimize_linear(&self, _: &Dataset<LinearLoss>, _: &[f64]) -> Result<OracleOutcome> {
            Ok(OracleOutcome { w: vec![0.25], value: 0.0, exact: true, nodes_explored: 0 })
        }
    }

    fn data() -> Dataset<LinearLoss> {
        Dataset::new(vec![
            LinearLoss::new(vec![0.4], 0.5).unwrap(),
            LinearLoss::new(vec![-0.1], 0.5).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn identical_datasets_are_perfectly_stable() {
        let oracle = BoxLinearOracle::new(ContinuousSpace::cube(1, -1.0, 1.0).unwrap());
        let est = estimate_stability(&data(), &data(), &oracle, 1.0, 500, &RngStream::new(1, 0)).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.half_width, 0.0);
    }

    #[test]
    fn more_noise_is_more_stable() {
        let oracle = BoxLinearOracle::new(ContinuousSpace::cube(1, -1.0, 1.0).unwrap());
        let neighbor = data().neighbor(0, LinearLoss::new(vec![-0.4], 0.5).unwrap()).unwrap();
        let rng = RngStream::new(2, 0);
        let est: Vec<f64> = [4.0, 1.0, 0.25]
            .iter()
            .map(|&rate| estimate_stability(&data(), &neighbor, &oracle, rate, 20_000, &rng).unwrap().mean)
            .collect();
        assert!(est[0] >= est[1] && est[1] >= est[2], "{est:?}");
    }

    #[test]
    fn constant_oracle_concentrates() {
        let rep = check_concentration(&data(), &Constant, 1.0, 0.1, 0.1, 2.0, 50, 1 << 30, &RngStream::new(3, 0)).unwrap();
        assert_eq!(rep.failures, 0);
        assert_eq!(rep.worst_deviation, 0.0);
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn box_instance_concentrates() {
        let oracle = BoxLinearOracle::new(ContinuousSpace::cube(1, -1.0, 1.0).unwrap());
        let rep = check_concentration(&data(), &oracle, 1.0, 0.1, 0.1, 2.0, 200, 1 << 30, &RngStream::new(4, 0)).unwrap();
        assert_eq!(rep.m, 150);
        assert_eq!(rep.verdict, Verdict::Pass, "{rep:?}");
    }

    #[test]
    fn budget_cap_is_inconclusive() {
        let rep = check_concentration(&data(), &Constant, 1.0, 1e-4, 0.1, 2.0, 10, 1_000_000, &RngStream::new(5, 0)).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        assert_eq!(rep.m, 0);
    }
}
