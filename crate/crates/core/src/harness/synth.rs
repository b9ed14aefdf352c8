use rand::Rng;

use crate::domain::{dataset_loss, dot, Dataset, DiscreteSpace, Label, LabeledExample, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::noise::{gaussian_vector, StreamId};

const SYNTH_STREAM: u64 = 0x5e7d;

/// A synthetic halfspace dataset and its planted separator.
#[derive(Clone, Debug, PartialEq)]
pub struct Synth {
    pub data: Dataset<LabeledExample>,
    pub planted: Vec<f64>,
    /// `L(D, w*)`, the number of examples the planted separator gets wrong.
    pub planted_loss: f64,
    pub flipped: usize,
}

/// Draws `n` points uniformly on the unit sphere in `ℝ^d`, keeps those at distance at least
/// `margin` from the hyperplane of a planted nonzero point `w*` of `halfspace_grid(d)`,
/// labels them by `sgn<x, w*>`, then flips each label with probability `label_noise`.
pub fn synth_halfspace(n: usize, d: usize, margin: f64, label_noise: f64, seed: u64) -> Result<Synth> {
    if n == 0 || d == 0 {
        return Err(Error::invalid("n, d", "must be positive"));
    }
    if !(margin >= 0.0) {
        return Err(Error::invalid("margin", "must be nonnegative"));
    }
    if !(0.0..0.5).contains(&label_noise) {
        return Err(Error::invalid("noise", format!("must lie in [0, 0.5), got {label_noise}")));
    }
    let mut rng = StreamId::new(seed, 0).child(SYNTH_STREAM).open();
    let grid = DiscreteSpace::halfspace_grid(d)?.points(DEFAULT_ENUMERATION_CAP)?;
    let nonzero: Vec<&Vec<f64>> = grid.iter().filter(|w| w.iter().any(|&v| v != 0.0)).collect();
    let planted = nonzero[rng.random_range(0..nonzero.len())].clone();
    let norm = dot(&planted, &planted).sqrt();

    let attempts_cap = 1000 * n + 1000;
    let mut attempts = 0;
    let mut items = Vec::with_capacity(n);
    while items.len() < n {
        if attempts == attempts_cap {
            return Err(Error::MarginUnattainable { wanted: n, margin, attempts });
        }
        attempts += 1;
        let g = gaussian_vector(d, 1.0, &mut rng)?;
        let len = dot(&g, &g).sqrt();
        if len == 0.0 {
            continue;
        }
        let x: Vec<f64> = g.iter().map(|v| v / len).collect();
        let m = dot(&x, &planted);
        if m.abs() / norm < margin {
            continue;
        }
        items.push(LabeledExample::new(x, Label::of_margin(m))?);
    }
    let mut flipped = 0;
    for e in items.iter_mut() {
        if rng.random::<f64>() < label_noise {
            e.y = match e.y {
                Label::Positive => Label::Negative,
                Label::Negative => Label::Positive,
            };
            flipped += 1;
        }
    }
    let data = Dataset::new(items)?;
    let planted_loss = dataset_loss(&data, &planted)?;
    Ok(Synth { data, planted, planted_loss, flipped })
}
