use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::domain::{DiscreteSpace, Label, LabeledExample, Loss, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};

/// Probe losses such that distinct parameters disagree on at least one of them.
///
/// Probes are 0/1 losses with label −1, so a probe at `x` scores `1{sgn<x, w> = +1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatorSet {
    dim: usize,
    probes: Vec<LabeledExample>,
}

impl SeparatorSet {
    pub fn new(dim: usize, probes: Vec<LabeledExample>) -> Result<Self> {
        if let Some(p) = probes.iter().find(|p| p.x.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: p.x.len() });
        }
        Ok(Self { dim, probes })
    }

    /// Builds probes at the given points.
    pub fn from_points(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        let probes = points
            .into_iter()
            .map(|x| LabeledExample::new(x, Label::Negative))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, probes)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }

    pub fn probes(&self) -> &[LabeledExample] {
        &self.probes
    }

    /// Probe losses at `w`, packed 64 per word.
    pub fn truth_row(&self, w: &[f64]) -> Vec<u64> {
        let mut row = vec![0u64; self.probes.len().div_ceil(64)];
        for (i, p) in self.probes.iter().enumerate() {
            if p.eval(w) != 0.0 {
                row[i / 64] |= 1 << (i % 64);
            }
        }
        row
    }
}

/// A candidate separator for grids of step `τ`.
///
/// Probes `±e_j / 2` read off the sign of every coordinate, which separates grids whose
/// coordinates lie in `{−τ, 0, τ}`. For `τ < 1` the set adds tilted probes
/// `e_j − kτ e_{j+1}` (indices mod d) for `k = 1..⌈1/τ⌉`. Halfspaces through the origin
/// cannot tell `w` from `2w`, so no probe set separates a grid that holds both; run
/// [`verify_separator`] before relying on the result.
pub fn separator_candidate(dim: usize, step: f64) -> Result<SeparatorSet> {
    if dim == 0 {
        return Err(Error::invalid("d", "must be positive"));
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::invalid("tau", format!("must lie in (0, 1], got {step}")));
    }
    let mut points = Vec::new();
    for j in 0..dim {
        for s in [0.5, -0.5] {
            let mut x = vec![0.0; dim];
            x[j] = s;
            points.push(x);
        }
    }
    if step < 1.0 && dim > 1 {
        let tilts = (1.0 / step - 1e-9).ceil() as usize;
        'outer: for k in 1..=tilts {
            for j in 0..dim {
                if points.len() >= (2.0 * dim as f64 / step).ceil() as usize + dim {
                    break 'outer;
                }
                let mut x = vec![0.0; dim];
                x[j] = 1.0;
                x[(j + 1) % dim] = -(k as f64) * step;
                points.push(x);
            }
        }
    }
    SeparatorSet::from_points(dim, points)
}

/// Outcome of [`verify_separator`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SeparatorCheck {
    Pass,
    /// The first pair `(w, w′)`, in lexicographic order of member positions, that every
    /// probe scores alike.
    Counterexample(Vec<f64>, Vec<f64>),
}

impl SeparatorCheck {
    pub fn passed(&self) -> bool {
        matches!(self, SeparatorCheck::Pass)
    }
}

/// Checks every pair of members of `space`.
pub fn verify_separator(sep: &SeparatorSet, space: &DiscreteSpace) -> Result<SeparatorCheck> {
    if sep.dim() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), got: sep.dim() });
    }
    let points = space.points(DEFAULT_ENUMERATION_CAP)?;
    // first two members of every truth-table class
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut best: Option<(usize, usize)> = None;
    for (j, w) in points.iter().enumerate() {
        let row = sep.truth_row(w);
        match seen.get(&row) {
            None => {
                seen.insert(row, j);
            }
            Some(&i) => {
                if best.is_none_or(|b| (i, j) < b) {
                    best = Some((i, j));
                }
            }
        }
    }
    Ok(match best {
        None => SeparatorCheck::Pass,
        Some((i, j)) => SeparatorCheck::Counterexample(points[i].clone(), points[j].clone()),
    })
}
