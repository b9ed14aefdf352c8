use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `(ε, δ)` pair with `ε > 0` and `0 < δ < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyBudget {
    epsilon: f64,
    delta: f64,
}

impl PrivacyBudget {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid("epsilon", format!("must be positive and finite, got {epsilon}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::invalid("delta", format!("must lie in (0, 1), got {delta}")));
        }
        Ok(Self { epsilon, delta })
    }

    /// `δ = 1/n²`.
    pub fn with_inverse_square_delta(epsilon: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("n", "1/n² needs at least two records"));
        }
        let n = n as f64;
        Self::new(epsilon, 1.0 / (n * n))
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}
