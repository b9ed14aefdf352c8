use super::dataset::{Dataset, WeightedDataset};
use super::loss::Loss;
use super::normalize::project;
use super::space::DiscreteSpace;
use crate::error::{Error, Result};

/// Left-to-right inner product. Oracles and evaluators share it so that equal inputs give
/// bit-identical objective values.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub(crate) fn loss_sum<L: Loss>(items: &[L], w: &[f64]) -> f64 {
    items.iter().fold(0.0, |acc, l| acc + l.eval(w))
}

/// `L(D, w) = Σ_i l_i(w)`.
pub fn dataset_loss<L: Loss>(data: &Dataset<L>, w: &[f64]) -> Result<f64> {
    check_dim(data.dim(), w.len())?;
    Ok(loss_sum(data.items(), w))
}

/// Unnormalized `L(D, w) − <η, π(w)>`, the objective minimized by a normalized oracle.
pub fn normalized_objective<L: Loss>(
    data: &Dataset<L>,
    w: &[f64],
    eta: &[f64],
    radius: f64,
) -> Result<f64> {
    check_dim(data.dim(), w.len())?;
    check_dim(data.dim() + 1, eta.len())?;
    let lifted = project(w, radius)?;
    Ok(loss_sum(data.items(), w) - dot(eta, &lifted))
}

/// Unnormalized `L(D, w) − <η, w>`, the objective minimized by a linear oracle.
pub fn linear_objective<L: Loss>(data: &Dataset<L>, w: &[f64], eta: &[f64]) -> Result<f64> {
    check_dim(data.dim(), w.len())?;
    check_dim(data.dim(), eta.len())?;
    Ok(loss_sum(data.items(), w) - dot(eta, w))
}

/// `Σ_i p_i l_i(w)`.
pub fn weighted_objective<L: Loss>(data: &WeightedDataset<L>, w: &[f64]) -> Result<f64> {
    check_dim(data.dim(), w.len())?;
    Ok(weighted_sum(data.items(), w))
}

pub(crate) fn weighted_sum<L: Loss>(items: &[(L, f64)], w: &[f64]) -> f64 {
    items.iter().fold(0.0, |acc, (l, p)| acc + p * l.eval(w))
}

fn require_records<L: Loss>(data: &Dataset<L>) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::invalid("dataset", "normalized losses need at least one record"));
    }
    Ok(data.len() as f64)
}

/// Perturbed normalized loss `(L(D, w) − <η, π(w)>) / n` for `w ∈ space`.
pub fn perturbed_normalized_loss<L: Loss>(
    data: &Dataset<L>,
    w: &[f64],
    eta: &[f64],
    space: &DiscreteSpace,
) -> Result<f64> {
    let n = require_records(data)?;
    check_dim(space.dim(), w.len())?;
    if !space.contains(w) {
        return Err(Error::NotInSpace(w.to_vec()));
    }
    Ok(normalized_objective(data, w, eta, space.radius())? / n)
}

/// Perturbed loss `(L(D, w) − <η, w>) / n`.
pub fn perturbed_loss<L: Loss>(data: &Dataset<L>, w: &[f64], eta: &[f64]) -> Result<f64> {
    let n = require_records(data)?;
    Ok(linear_objective(data, w, eta)? / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::LabeledExample;

    fn pos(x: Vec<f64>) -> LabeledExample {
        LabeledExample::positive(x).unwrap()
    }

    #[test]
    fn dataset_loss_examples() {
        let d = Dataset::new(vec![pos(vec![1.0]), pos(vec![-1.0])]).unwrap();
        assert_eq!(dataset_loss(&d, &[1.0]).unwrap(), 1.0);
        let single = Dataset::new(vec![pos(vec![1.0])]).unwrap();
        assert_eq!(dataset_loss(&single, &[1.0]).unwrap(), 0.0);
        let five = Dataset::new(vec![pos(vec![1.0]); 5]).unwrap();
        assert_eq!(dataset_loss(&five, &[-1.0]).unwrap(), 5.0);
        assert!(dataset_loss(&five, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn perturbed_normalized_examples() {
        let space = DiscreteSpace::new(1, 1.0, 1.0, 1.0).unwrap();
        let d = Dataset::new(vec![pos(vec![1.0]), pos(vec![-1.0])]).unwrap();
        assert_eq!(perturbed_normalized_loss(&d, &[1.0], &[0.0, 0.0], &space).unwrap(), 0.5);
        assert_eq!(perturbed_normalized_loss(&d, &[1.0], &[-10.0, 0.0], &space).unwrap(), 5.5);
        let neg = Dataset::new(vec![LabeledExample::negative(vec![1.0]).unwrap()]).unwrap();
        assert_eq!(perturbed_normalized_loss(&neg, &[0.0], &[0.0, 3.0], &space).unwrap(), -3.0);
        assert!(matches!(
            perturbed_normalized_loss(&d, &[2.0], &[0.0, 0.0], &space),
            Err(Error::NotInSpace(_))
        ));
        assert!(perturbed_normalized_loss(&d, &[1.0], &[0.0], &space).is_err());
    }

    #[test]
    fn perturbed_linear_examples() {
        let d = Dataset::new(vec![pos(vec![-1.0, 0.0]), pos(vec![-1.0, 0.0])]).unwrap();
        assert_eq!(dataset_loss(&d, &[1.0, 0.0]).unwrap(), 2.0);
        assert_eq!(perturbed_loss(&d, &[1.0, 0.0], &[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(perturbed_loss(&d, &[1.0, 0.0], &[4.0, 0.0]).unwrap(), -1.0);
        assert_eq!(perturbed_loss(&d, &[0.0, 0.0], &[7.0, -3.0]).unwrap(), 1.0);
    }

    #[test]
    fn weighted_sum_matches_manual() {
        let wd = WeightedDataset::new(1, vec![(pos(vec![1.0]), 2.5), (pos(vec![-1.0]), -4.0)]).unwrap();
        assert_eq!(weighted_objective(&wd, &[1.0]).unwrap(), -4.0);
        assert_eq!(weighted_objective(&wd, &[-1.0]).unwrap(), 2.5);
    }
}
