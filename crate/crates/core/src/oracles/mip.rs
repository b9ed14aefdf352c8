use serde::{Deserialize, Serialize};

use crate::domain::{
    dot, project, Dataset, DiscreteSpace, LabeledExample, Loss, WeightedDataset, BOUNDARY_SLACK,
};
use crate::error::{Error, Result};

/// Which objective a [`MipInstance`] encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MipMode {
    /// `Σ e_i − Σ_j η_j w_j / D − η_{d+1} λ / D` with `λ² + ‖w‖² ≤ D²`.
    Normalized,
    /// `Σ e_i − <η, w>`.
    Linear,
    /// `Σ p_i e_i − <η, w>` over the box `|w_j| ≤ B`.
    Weighted,
}

impl MipMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MipMode::Normalized => "normalized",
            MipMode::Linear => "linear",
            MipMode::Weighted => "weighted",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "normalized" => Ok(MipMode::Normalized),
            "linear" => Ok(MipMode::Linear),
            "weighted" => Ok(MipMode::Weighted),
            other => Err(Error::invalid("mode", format!("unknown MIP mode `{other}`"))),
        }
    }
}

/// A 0/1-loss halfspace problem in mixed-integer form.
///
/// Each example contributes a binary `e_i` and the big-M row
/// `y_i <x_i, w> + c e_i ≥ r_i`, where `r_i = κ` for positive labels and `0` for negative
/// ones (so that a zero margin counts as the negative class, as in the evaluator).
/// Examples with negative weight in weighted mode get the reverse row instead, forcing
/// `e_i = 1` only when the example really is misclassified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MipInstance {
    pub examples: Vec<LabeledExample>,
    pub eta: Vec<f64>,
    pub space: DiscreteSpace,
    pub big_m: f64,
    pub kappa: f64,
    pub mode: MipMode,
    pub weights: Vec<f64>,
}

fn max_norm(examples: &[LabeledExample]) -> f64 {
    examples.iter().fold(0.0, |m, e| m.max(dot(&e.x, &e.x).sqrt()))
}

impl MipInstance {
    fn build(
        examples: Vec<LabeledExample>,
        eta: Vec<f64>,
        space: DiscreteSpace,
        mode: MipMode,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let x_max = max_norm(&examples);
        let inst = Self {
            big_m: 1.0 + space.radius() * x_max,
            kappa: 1e-9 * (1.0 + x_max),
            examples,
            eta,
            space,
            mode,
            weights,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn normalized(
        data: &Dataset<LabeledExample>,
        eta: &[f64],
        space: &DiscreteSpace,
    ) -> Result<Self> {
        let n = data.len();
        Self::build(data.items().to_vec(), eta.to_vec(), space.clone(), MipMode::Normalized, vec![1.0; n])
    }

    pub fn linear(data: &Dataset<LabeledExample>, eta: &[f64], space: &DiscreteSpace) -> Result<Self> {
        let n = data.len();
        Self::build(data.items().to_vec(), eta.to_vec(), space.clone(), MipMode::Linear, vec![1.0; n])
    }

    pub fn weighted(data: &WeightedDataset<LabeledExample>, space: &DiscreteSpace) -> Result<Self> {
        let (examples, weights) = data.items().iter().cloned().unzip();
        Self::build(examples, vec![0.0; space.dim()], space.clone(), MipMode::Weighted, weights)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if let Some(e) = self.examples.iter().find(|e| e.x.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: e.x.len() });
        }
        let eta_len = if self.mode == MipMode::Normalized { d + 1 } else { d };
        if self.eta.len() != eta_len {
            return Err(Error::DimensionMismatch { expected: eta_len, got: self.eta.len() });
        }
        if self.eta.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("eta", "non-finite perturbation"));
        }
        if self.weights.len() != self.examples.len() {
            return Err(Error::DimensionMismatch { expected: self.examples.len(), got: self.weights.len() });
        }
        if self.mode != MipMode::Weighted && self.weights.iter().any(|&p| p != 1.0) {
            return Err(Error::invalid("weights", "only weighted mode accepts non-unit weights"));
        }
        let reach = self.space.radius() * max_norm(&self.examples);
        if !(self.big_m > reach) {
            return Err(Error::invalid(
                "big_m",
                format!("c = {} must exceed max‖x‖·D = {reach}", self.big_m),
            ));
        }
        if !(self.kappa > 0.0 && self.kappa < self.big_m - reach) {
            return Err(Error::invalid("kappa", format!("{} outside (0, c − max‖x‖·D)", self.kappa)));
        }
        if self.mode == MipMode::Weighted {
            let corner = self.space.grid_value(self.space.extent()) * (d as f64).sqrt();
            let r = self.space.radius();
            if 1.0 - (corner * corner) / (r * r) < -BOUNDARY_SLACK {
                return Err(Error::invalid(
                    "space",
                    "weighted mode encodes a box only; the ball constraint must be inactive",
                ));
            }
        }
        Ok(())
    }

    /// Objective value at `w`, evaluated exactly as the exhaustive oracles do.
    pub fn objective(&self, w: &[f64]) -> Result<f64> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: w.len() });
        }
        Ok(match self.mode {
            MipMode::Normalized => {
                let loss = self.examples.iter().fold(0.0, |acc, e| acc + e.eval(w));
                loss - dot(&self.eta, &project(w, self.space.radius())?)
            }
            MipMode::Linear => {
                let loss = self.examples.iter().fold(0.0, |acc, e| acc + e.eval(w));
                loss - dot(&self.eta, w)
            }
            MipMode::Weighted => {
                let loss = self
                    .examples
                    .iter()
                    .zip(&self.weights)
                    .fold(0.0, |acc, (e, p)| acc + p * e.eval(w));
                loss - dot(&self.eta, w)
            }
        })
    }

    /// Equality up to a relative tolerance on reals; labels, mode and sizes must match exactly.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= rel_tol * a.abs().max(b.abs()).max(1.0);
        let all_close = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close(*x, *y));
        self.mode == other.mode
            && self.space.dim() == other.space.dim()
            && close(self.space.step(), other.space.step())
            && close(self.space.coord_bound(), other.space.coord_bound())
            && close(self.space.radius(), other.space.radius())
            && close(self.big_m, other.big_m)
            && close(self.kappa, other.kappa)
            && all_close(&self.eta, &other.eta)
            && all_close(&self.weights, &other.weights)
            && self.examples.len() == other.examples.len()
            && self
                .examples
                .iter()
                .zip(&other.examples)
                .all(|(a, b)| a.y == b.y && all_close(&a.x, &b.x))
    }
}
