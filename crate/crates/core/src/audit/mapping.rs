use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{project, Dataset, DiscreteSpace, Label, LabeledExample, Loss};
use crate::error::{Error, Result};
use crate::noise::{gaussian_vector, RngStream};
use crate::oracles::ExhaustiveOracle;

/// `η + c π(ŵ)`.
pub fn shift_map(w_hat: &[f64], eta: &[f64], c_shift: f64, radius: f64) -> Result<Vec<f64>> {
    let lifted = project(w_hat, radius)?;
    if lifted.len() != eta.len() {
        return Err(Error::DimensionMismatch { expected: lifted.len(), got: eta.len() });
    }
    Ok(eta.iter().zip(&lifted).map(|(e, p)| e + c_shift * p).collect())
}

/// The two shift magnitudes in circulation, `(2GD²/τ, 4GD²/τ)`.
pub fn shift_magnitudes(lipschitz: f64, radius: f64, step: f64) -> (f64, f64) {
    let base = lipschitz * radius * radius / step;
    (2.0 * base, 4.0 * base)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MappingOutcome {
    Pass,
    /// The first minimization had several minimizers.
    Skipped,
    /// `ŵ` is still optimal on `D′` but shares the minimum with another point.
    ShiftTie { other: Vec<f64> },
    /// Some `v` beats `ŵ` strictly on `D′` under the shifted noise.
    Violation { w_hat: Vec<f64>, v: Vec<f64>, w_hat_value: f64, v_value: f64 },
}

fn argmins(values: &[f64]) -> (f64, Vec<usize>) {
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    (min, (0..values.len()).filter(|&i| values[i] == min).collect())
}

/// Minimizes on `(D, η)`, shifts the noise toward the minimizer `ŵ`, and checks that `ŵ`
/// stays optimal on `(D′, η + c π(ŵ))`.
pub fn check_mapping_lemma<L: Loss + PartialEq>(
    data: &Dataset<L>,
    neighbor: &Dataset<L>,
    eta: &[f64],
    oracle: &ExhaustiveOracle,
    c_shift: f64,
) -> Result<MappingOutcome> {
    data.differing_index(neighbor)?;
    let (_, first) = argmins(&oracle.normalized_values(data, eta)?);
    if first.len() > 1 {
        return Ok(MappingOutcome::Skipped);
    }
    let points = oracle.points();
    let w_hat = &points[first[0]];
    let shifted = shift_map(w_hat, eta, c_shift, oracle.space().radius())?;
    let values = oracle.normalized_values(neighbor, &shifted)?;
    let (min, winners) = argmins(&values);
    let own = values[first[0]];
    if own > min {
        let v = winners[0];
        return Ok(MappingOutcome::Violation {
            w_hat: w_hat.clone(),
            v: points[v].clone(),
            w_hat_value: own,
            v_value: min,
        });
    }
    Ok(match winners.iter().find(|&&i| i != first[0]) {
        Some(&i) => MappingOutcome::ShiftTie { other: points[i].clone() },
        None => MappingOutcome::Pass,
    })
}

/// Fraction of `trials` Gaussian draws whose normalized objective has a tied minimum.
pub fn tie_rate<L: Loss>(
    data: &Dataset<L>,
    oracle: &ExhaustiveOracle,
    sigma: f64,
    trials: u64,
    rng: &mut RngStream,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::invalid("trials", "must be positive"));
    }
    let dim = oracle.space().dim() + 1;
    let mut ties = 0u64;
    for _ in 0..trials {
        let eta = gaussian_vector(dim, sigma, rng)?;
        if argmins(&oracle.normalized_values(data, &eta)?).1.len() > 1 {
            ties += 1;
        }
    }
    Ok(ties as f64 / trials as f64)
}

/// Tally of a batch of mapping checks at one shift magnitude.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MappingSummary {
    pub c_shift_factor: f64,
    pub trials: u64,
    pub passes: u64,
    pub skipped: u64,
    pub shift_ties: u64,
    pub violations: u64,
    pub first_violation: Option<MappingOutcome>,
}

fn random_example(d: usize, rng: &mut RngStream) -> Result<LabeledExample> {
    let x = gaussian_vector(d, 1.0, rng)?;
    let y = if rng.random::<bool>() { Label::Positive } else { Label::Negative };
    LabeledExample::new(x, y)
}

/// Random trials on `halfspace_grid(d)` for `d ≤ max_dim`, 0/1 loss (`G = 1/τ = 1`).
///
/// Trial `t` uses `rng.child(t)`: dimension, dataset size (1 to 8), dataset, replaced
/// index, replacement, and a Gaussian `η` whose scale cycles through 0.5, 2 and 8. Each
/// trial is checked at every factor `k` in `factors`, with shift `k G D² / τ`.
pub fn mapping_experiment(
    trials: u64,
    max_dim: usize,
    factors: &[f64],
    rng: &RngStream,
) -> Result<Vec<MappingSummary>> {
    if max_dim == 0 {
        return Err(Error::invalid("max_dim", "must be positive"));
    }
    let oracles = (1..=max_dim)
        .map(|d| ExhaustiveOracle::new(DiscreteSpace::halfspace_grid(d)?))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<MappingSummary> = factors
        .iter()
        .map(|&k| MappingSummary { c_shift_factor: k, trials, ..Default::default() })
        .collect();
    for t in 0..trials {
        let mut r = rng.child(t);
        let d = r.random_range(1..=max_dim);
        let n = r.random_range(1..=8usize);
        let items = (0..n).map(|_| random_example(d, &mut r)).collect::<Result<Vec<_>>>()?;
        let data = Dataset::new(items)?;
        let idx = r.random_range(0..n);
        let neighbor = data.neighbor(idx, random_example(d, &mut r)?)?;
        let scale = [0.5, 2.0, 8.0][(t % 3) as usize];
        let eta = gaussian_vector(d + 1, scale, &mut r)?;
        let oracle = &oracles[d - 1];
        let space = oracle.space();
        for summary in out.iter_mut() {
            let c = summary.c_shift_factor * space.radius() * space.radius() / space.step();
            match check_mapping_lemma(&data, &neighbor, &eta, oracle, c)? {
                MappingOutcome::Pass => summary.passes += 1,
                MappingOutcome::Skipped => summary.skipped += 1,
                MappingOutcome::ShiftTie { .. } => summary.shift_ties += 1,
                v @ MappingOutcome::Violation { .. } => {
                    summary.violations += 1;
                    summary.first_violation.get_or_insert(v);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> ExhaustiveOracle {
        ExhaustiveOracle::new(DiscreteSpace::new(1, 1.0, 1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn shift_map_examples() {
        let eta = [0.3, -0.2, 0.1];
        assert_eq!(shift_map(&[1.0, 0.0], &eta, 0.0, 2.0).unwrap(), eta.to_vec());
        assert_eq!(shift_map(&[0.0], &[0.0, 0.0], 3.0, 1.0).unwrap(), vec![0.0, 3.0]);
        let moved = shift_map(&[1.0, -1.0], &eta, 2.5, 2.0).unwrap();
        let dist = moved.iter().zip(&eta).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        assert!((dist - 2.5).abs() < 1e-12);
    }

    #[test]
    fn self_neighbor_always_passes() {
        let oracle = line();
        let data = Dataset::new(vec![
            LabeledExample::positive(vec![1.0]).unwrap(),
            LabeledExample::negative(vec![0.5]).unwrap(),
        ])
        .unwrap();
        let mut rng = RngStream::new(4, 0);
        for _ in 0..200 {
            let eta = gaussian_vector(2, 2.0, &mut rng).unwrap();
            for c in [0.0, 0.5, 2.0, 4.0] {
                let out = check_mapping_lemma(&data, &data, &eta, &oracle, c).unwrap();
                assert!(matches!(out, MappingOutcome::Pass | MappingOutcome::Skipped), "{out:?}");
            }
        }
    }

    #[test]
    fn unshifted_noise_can_flip_the_argmin() {
        // on D the point w = 1 wins; replacing the only example by its mirror makes w = −1 win
        let oracle = line();
        let data = Dataset::new(vec![LabeledExample::positive(vec![1.0]).unwrap()]).unwrap();
        let neighbor = data.neighbor(0, LabeledExample::positive(vec![-1.0]).unwrap()).unwrap();
        let eta = [0.0, 0.1];
        let out = check_mapping_lemma(&data, &neighbor, &eta, &oracle, 0.0).unwrap();
        assert!(matches!(out, MappingOutcome::Violation { .. }), "{out:?}");
        let out = check_mapping_lemma(&data, &neighbor, &eta, &oracle, 4.0).unwrap();
        assert_eq!(out, MappingOutcome::Pass);
    }

    #[test]
    fn ties() {
        let oracle = line();
        let data = Dataset::new(vec![
            LabeledExample::positive(vec![1.0]).unwrap(),
            LabeledExample::positive(vec![-1.0]).unwrap(),
        ])
        .unwrap();
        // w = 1 and w = −1 both lose one example
        let mut rng = RngStream::new(0, 0);
        assert_eq!(tie_rate(&data, &oracle, 0.0, 10, &mut rng).unwrap(), 1.0);
        assert_eq!(tie_rate(&data, &oracle, 1.0, 10_000, &mut rng).unwrap(), 0.0);
        let single = ExhaustiveOracle::new(DiscreteSpace::new(1, 1.0, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!(tie_rate(&data, &single, 0.0, 10, &mut rng).unwrap(), 0.0);
    }

    #[test]
    fn experiment_is_deterministic() {
        let rng = RngStream::new(9, 0);
        let a = mapping_experiment(50, 2, &[2.0, 4.0], &rng).unwrap();
        let b = mapping_experiment(50, 2, &[2.0, 4.0], &rng).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[1].violations, 0);
        assert_eq!(a[0].trials, a[0].passes + a[0].skipped + a[0].shift_ties + a[0].violations);
    }
}
