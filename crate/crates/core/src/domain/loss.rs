use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A loss function over parameter vectors of a fixed dimension.
///
/// Implementations may assume `w.len() == self.dim()`; dimension checks happen at the
/// dataset boundary.
pub trait Loss {
    fn dim(&self) -> usize;
    fn eval(&self, w: &[f64]) -> f64;
}

/// Binary class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn from_sign(y: f64) -> Result<Self> {
        if y == 1.0 {
            Ok(Label::Positive)
        } else if y == -1.0 {
            Ok(Label::Negative)
        } else {
            Err(Error::invalid("label", format!("expected -1 or +1, got {y}")))
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    /// Label predicted by a margin, with `sgn(0) = -1`.
    pub fn of_margin(margin: f64) -> Self {
        if margin > 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

/// A record `(x, y)` inducing the 0/1 loss `1[y != sgn(<x, w>)]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub x: Vec<f64>,
    pub y: Label,
}

impl LabeledExample {
    pub fn new(x: Vec<f64>, y: Label) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::invalid("x", "feature vector is empty"));
        }
        if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("x", format!("non-finite feature {bad}")));
        }
        Ok(Self { x, y })
    }

    pub fn positive(x: Vec<f64>) -> Result<Self> {
        Self::new(x, Label::Positive)
    }

    pub fn negative(x: Vec<f64>) -> Result<Self> {
        Self::new(x, Label::Negative)
    }

    pub fn margin(&self, w: &[f64]) -> f64 {
        super::dot(&self.x, w)
    }
}

impl Loss for LabeledExample {
    fn dim(&self) -> usize {
        self.x.len()
    }

    fn eval(&self, w: &[f64]) -> f64 {
        if Label::of_margin(self.margin(w)) == self.y {
            0.0
        } else {
            1.0
        }
    }
}

/// The 0/1 loss of one example, with the `sgn(0) = -1` convention.
pub fn zero_one_loss(example: &LabeledExample, w: &[f64]) -> Result<f64> {
    if example.x.len() != w.len() {
        return Err(Error::DimensionMismatch { expected: example.x.len(), got: w.len() });
    }
    Ok(example.eval(w))
}

/// Affine loss `<coef, w> + offset`.
///
/// Over a box its ℓ1-Lipschitz constant is `max_j |coef_j|`; callers are responsible
/// for scaling values into `[0, 1]` when the sample-average mechanism needs that.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearLoss {
    pub coef: Vec<f64>,
    pub offset: f64,
}

impl LinearLoss {
    pub fn new(coef: Vec<f64>, offset: f64) -> Result<Self> {
        if coef.is_empty() {
            return Err(Error::invalid("coef", "coefficient vector is empty"));
        }
        if coef.iter().chain(std::iter::once(&offset)).any(|v| !v.is_finite()) {
            return Err(Error::invalid("coef", "non-finite coefficient"));
        }
        Ok(Self { coef, offset })
    }

    pub fn l1_lipschitz(&self) -> f64 {
        self.coef.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Loss for LinearLoss {
    fn dim(&self) -> usize {
        self.coef.len()
    }

    fn eval(&self, w: &[f64]) -> f64 {
        super::dot(&self.coef, w) + self.offset
    }
}

/// Lipschitz constant and value range of a loss class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossClassSpec {
    pub lipschitz: f64,
    pub value_lo: f64,
    pub value_hi: f64,
}

impl LossClassSpec {
    pub fn new(lipschitz: f64, value_lo: f64, value_hi: f64) -> Result<Self> {
        if !(lipschitz > 0.0 && lipschitz.is_finite()) {
            return Err(Error::invalid("lipschitz", format!("must be positive, got {lipschitz}")));
        }
        if !(value_lo <= value_hi) {
            return Err(Error::invalid("value range", format!("[{value_lo}, {value_hi}] is empty")));
        }
        Ok(Self { lipschitz, value_lo, value_hi })
    }

    /// The 0/1 class over a τ-separated space: values in `[0, 1]`, hence `1/τ`-Lipschitz.
    pub fn zero_one(step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::invalid("tau", format!("must be positive, got {step}")));
        }
        Self::new(1.0 / step, 0.0, 1.0)
    }
}
