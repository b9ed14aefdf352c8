use super::{LinearOracle, OracleOutcome};
use crate::domain::objective_internals::loss_sum;
use crate::domain::{dot, ContinuousSpace, Dataset, LinearLoss};
use crate::error::{Error, Result};

/// Closed-form linear oracle for affine losses over a box.
///
/// `Σ_i <a_i, w> − <η, w>` separates by coordinate, so each `w_j` sits at the lower face
/// when its total coefficient is nonnegative and at the upper face otherwise.
#[derive(Clone, Debug)]
pub struct BoxLinearOracle {
    space: ContinuousSpace,
}

impl BoxLinearOracle {
    pub fn new(space: ContinuousSpace) -> Self {
        Self { space }
    }

    pub fn space(&self) -> &ContinuousSpace {
        &self.space
    }
}

impl LinearOracle<LinearLoss> for BoxLinearOracle {
    fn minimize_linear(&self, data: &Dataset<LinearLoss>, eta: &[f64]) -> Result<OracleOutcome> {
        let d = self.space.dim();
        if data.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: data.dim() });
        }
        if eta.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: eta.len() });
        }
        let w: Vec<f64> = (0..d)
            .map(|j| {
                let slope = data.iter().fold(0.0, |acc, l| acc + l.coef[j]) - eta[j];
                if slope < 0.0 {
                    self.space.upper()[j]
                } else {
                    self.space.lower()[j]
                }
            })
            .collect();
        let value = loss_sum(data.items(), &w) - dot(eta, &w);
        Ok(OracleOutcome { w, value, exact: true, nodes_explored: 0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::linear_objective;

    #[test]
    fn picks_box_vertex() {
        let space = ContinuousSpace::cube(2, -1.0, 1.0).unwrap();
        let data = Dataset::new(vec![LinearLoss::new(vec![0.25, -0.25], 0.5).unwrap()]).unwrap();
        let oracle = BoxLinearOracle::new(space);
        let out = oracle.minimize_linear(&data, &[0.0, 0.0]).unwrap();
        assert_eq!(out.w, vec![-1.0, 1.0]);
        assert_eq!(out.value, 0.0);
        // a large linear reward flips the first coordinate
        let out = oracle.minimize_linear(&data, &[1.0, 0.0]).unwrap();
        assert_eq!(out.w, vec![1.0, 1.0]);
    }

    #[test]
    fn matches_vertex_enumeration() {
        let space = ContinuousSpace::new(vec![-1.0, 0.0, -2.0], vec![1.0, 3.0, 0.5]).unwrap();
        let data = Dataset::new(vec![
            LinearLoss::new(vec![0.1, -0.2, 0.05], 0.5).unwrap(),
            LinearLoss::new(vec![-0.3, 0.1, 0.02], 0.4).unwrap(),
        ])
        .unwrap();
        let eta = [0.1, -0.4, 0.3];
        let out = BoxLinearOracle::new(space.clone()).minimize_linear(&data, &eta).unwrap();
        let mut best = f64::INFINITY;
        for mask in 0..8u32 {
            let w: Vec<f64> = (0..3)
                .map(|j| if mask >> j & 1 == 1 { space.upper()[j] } else { space.lower()[j] })
                .collect();
            best = best.min(linear_objective(&data, &w, &eta).unwrap());
        }
        assert!((out.value - best).abs() < 1e-12);
    }
}
