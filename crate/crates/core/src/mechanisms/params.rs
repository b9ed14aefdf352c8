use serde::{Deserialize, Serialize};

use crate::domain::PrivacyBudget;
use crate::error::{Error, Result};

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
    }
}

fn unit_open(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must lie in (0, 1), got {v}")))
    }
}

/// Gaussian scale `7 G D² √ln(1/δ) / (τ ε)`.
pub fn sigma_objdisc(lipschitz: f64, radius: f64, step: f64, epsilon: f64, delta: f64) -> Result<f64> {
    positive("G", lipschitz)?;
    positive("D", radius)?;
    positive("tau", step)?;
    positive("epsilon", epsilon)?;
    unit_open("delta", delta)?;
    Ok(7.0 * lipschitz * radius * radius * (1.0 / delta).ln().sqrt() / (step * epsilon))
}

/// Gaussian scale `7 √(m ln(1/δ)) / ε` for a separator set of size `m`.
pub fn sigma_rspm(m_sep: usize, epsilon: f64, delta: f64) -> Result<f64> {
    if m_sep == 0 {
        return Err(Error::invalid("m_sep", "separator set is empty"));
    }
    positive("epsilon", epsilon)?;
    unit_open("delta", delta)?;
    Ok(7.0 * (m_sep as f64 * (1.0 / delta).ln()).sqrt() / epsilon)
}

/// Derived settings of the sampling mechanism.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjSampParams {
    pub gamma: f64,
    pub m: u64,
    /// Rate of the exponential perturbation.
    pub sigma: f64,
    /// Laplace numerator; the output noise has scale `λ/ε`.
    pub lambda: f64,
    pub beta: f64,
    pub alpha: f64,
}

/// `⌈x⌉`, except that values within a relative 1e-9 of an integer round to it.
fn ceil_tolerant(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

impl ObjSampParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dim: usize,
        n: usize,
        diameter_l2: f64,
        diameter_linf: f64,
        lipschitz: f64,
        budget: PrivacyBudget,
        beta: f64,
        alpha: f64,
    ) -> Result<Self> {
        if dim == 0 || n == 0 {
            return Err(Error::invalid("d, n", "must be positive"));
        }
        positive("D2", diameter_l2)?;
        positive("Dinf", diameter_linf)?;
        positive("G", lipschitz)?;
        unit_open("beta", beta)?;
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::invalid("alpha", format!("must be nonnegative, got {alpha}")));
        }
        let (d, nf, eps) = (dim as f64, n as f64, budget.epsilon());
        let gamma = (eps / nf).sqrt() * d.powf(1.25) * diameter_l2.sqrt();
        if gamma > 1.0 {
            return Err(Error::GammaTooLarge { gamma });
        }
        let m = ceil_tolerant((2.0 * d / budget.delta()).ln() / (2.0 * gamma * gamma)).max(1.0);
        let tail = 1.0 + (2.0 / beta).ln();
        let g2 = lipschitz * lipschitz;
        let dinf2 = diameter_linf * diameter_linf;
        let sigma = (diameter_l2 * (2.0 * d).sqrt() * eps / (250.0 * g2 * d * d * dinf2 * tail * nf)).sqrt();
        let lambda = 4.0 * diameter_linf * gamma
            + 250.0 * sigma * lipschitz * d * d * dinf2
            + alpha / (10.0 * lipschitz);
        Ok(Self { gamma, m: m as u64, sigma, lambda, beta, alpha })
    }
}
