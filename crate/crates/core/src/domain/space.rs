use serde::{Deserialize, Serialize};

use super::normalize::BOUNDARY_SLACK;
use crate::error::{Error, Result};

/// Default bound on the number of grid points an exhaustive enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 2_000_000;

/// The τ-separated grid `W_τ = { w ∈ τℤ^d : |w_j| ≤ B, ‖w‖₂ ≤ D }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteSpace {
    dim: usize,
    step: f64,
    coord_bound: f64,
    radius: f64,
}

impl DiscreteSpace {
    pub fn new(dim: usize, step: f64, coord_bound: f64, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("d", "dimension must be positive"));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::invalid("tau", format!("must be positive, got {step}")));
        }
        if !(coord_bound >= 0.0 && coord_bound.is_finite()) {
            return Err(Error::invalid("B", format!("must be nonnegative, got {coord_bound}")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("D", format!("must be positive, got {radius}")));
        }
        Ok(Self { dim, step, coord_bound, radius })
    }

    /// The halfspace grid used in the experiments: `τ = 1`, `B = ⌊√d⌋`, `D = √d`.
    pub fn halfspace_grid(dim: usize) -> Result<Self> {
        let root = (dim as f64).sqrt();
        Self::new(dim, 1.0, root.floor(), root)
    }

    /// The cube `{-1, 0, 1}^d` (ball constraint inactive), as searched by the separator baseline.
    pub fn ternary_cube(dim: usize) -> Result<Self> {
        Self::new(dim, 1.0, 1.0, (dim as f64).sqrt())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn coord_bound(&self) -> f64 {
        self.coord_bound
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Largest integer `K` with `Kτ ≤ B`.
    pub fn extent(&self) -> i64 {
        (self.coord_bound / self.step + 1e-9).floor() as i64
    }

    pub fn grid_value(&self, k: i64) -> f64 {
        k as f64 * self.step
    }

    /// Size of the enclosing box grid, `(2K + 1)^d`.
    pub fn box_size(&self) -> f64 {
        ((2 * self.extent() + 1) as f64).powi(self.dim as i32)
    }

    pub fn in_ball(&self, w: &[f64]) -> bool {
        let sq: f64 = w.iter().map(|v| v * v).sum();
        1.0 - sq / (self.radius * self.radius) >= -BOUNDARY_SLACK
    }

    pub fn contains(&self, w: &[f64]) -> bool {
        if w.len() != self.dim {
            return false;
        }
        let k_max = self.extent();
        let on_grid = w.iter().all(|&v| {
            let k = (v / self.step).round();
            (v / self.step - k).abs() <= 1e-9 && (k as i64).abs() <= k_max
        });
        on_grid && self.in_ball(w)
    }

    /// Grid points in lexicographic order, or an error when the box grid exceeds `cap`.
    pub fn iter(&self, cap: u64) -> Result<GridIter<'_>> {
        let size = self.box_size();
        if size > cap as f64 {
            return Err(Error::SpaceTooLarge { size, cap });
        }
        Ok(GridIter::new(self))
    }

    pub fn points(&self, cap: u64) -> Result<Vec<Vec<f64>>> {
        Ok(self.iter(cap)?.collect())
    }
}

/// Enumerates every member of `space` exactly once, lexicographically.
pub fn enumerate_space(space: &DiscreteSpace, cap: u64) -> Result<Vec<Vec<f64>>> {
    space.points(cap)
}

/// Odometer over `[-K, K]^d` that skips points outside the ball.
pub struct GridIter<'a> {
    space: &'a DiscreteSpace,
    counter: Vec<i64>,
    done: bool,
}

impl<'a> GridIter<'a> {
    fn new(space: &'a DiscreteSpace) -> Self {
        let k = space.extent();
        Self { space, counter: vec![-k; space.dim], done: false }
    }

    fn advance(&mut self) {
        let k = self.space.extent();
        for slot in self.counter.iter_mut().rev() {
            if *slot < k {
                *slot += 1;
                return;
            }
            *slot = -k;
        }
        self.done = true;
    }
}

impl Iterator for GridIter<'_> {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        while !self.done {
            let w: Vec<f64> = self.counter.iter().map(|&k| self.space.grid_value(k)).collect();
            self.advance();
            if self.space.in_ball(&w) {
                return Some(w);
            }
        }
        None
    }
}

/// An axis-aligned box with its ℓ2 and ℓ∞ diameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuousSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ContinuousSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::invalid("box", "dimension must be positive"));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len(), got: upper.len() });
        }
        for (lo, hi) in lower.iter().zip(&upper) {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::invalid("box", format!("invalid interval [{lo}, {hi}]")));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn diameter_l2(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| (u - l) * (u - l)).sum::<f64>().sqrt()
    }

    pub fn diameter_linf(&self) -> f64 {
        self.lower.iter().zip(&self.upper).fold(0.0, |m, (l, u)| m.max(u - l))
    }

    pub fn contains(&self, w: &[f64]) -> bool {
        w.len() == self.dim()
            && w.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (l, u))| l <= v && v <= u)
    }

    /// Coordinate-wise projection onto the box. Never applied inside a mechanism.
    pub fn clamp(&self, w: &[f64]) -> Vec<f64> {
        w.iter().zip(self.lower.iter().zip(&self.upper)).map(|(v, (l, u))| v.clamp(*l, *u)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enumerates_line() {
        let s = DiscreteSpace::new(1, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(enumerate_space(&s, 100).unwrap(), vec![vec![-1.0], vec![0.0], vec![1.0]]);
    }

    #[test]
    fn ball_excludes_corners() {
        let s = DiscreteSpace::new(2, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(enumerate_space(&s, 100).unwrap().len(), 5);
        let s = DiscreteSpace::new(2, 1.0, 1.0, 2f64.sqrt()).unwrap();
        assert_eq!(enumerate_space(&s, 100).unwrap().len(), 9);
    }

    #[test]
    fn sqrt_radius_keeps_boundary_points() {
        // sqrt(3)^2 rounds below 3; the slack keeps (1,1,1) inside.
        let s = DiscreteSpace::halfspace_grid(3).unwrap();
        assert!(s.contains(&[1.0, 1.0, 1.0]));
        assert_eq!(enumerate_space(&s, 100).unwrap().len(), 27);
    }

    #[test]
    fn cap_is_enforced() {
        let s = DiscreteSpace::new(8, 1.0, 3.0, 100.0).unwrap();
        assert!(matches!(s.points(1000), Err(Error::SpaceTooLarge { .. })));
    }

    #[test]
    fn fractional_step() {
        let s = DiscreteSpace::new(1, 0.1, 1.0, 1.0).unwrap();
        assert_eq!(s.extent(), 10);
        assert_eq!(s.points(100).unwrap().len(), 21);
        assert!(s.contains(&[0.3]));
        assert!(!s.contains(&[0.35]));
    }

    #[test]
    fn rejects_invalid_space() {
        assert!(DiscreteSpace::new(0, 1.0, 1.0, 1.0).is_err());
        assert!(DiscreteSpace::new(1, 0.0, 1.0, 1.0).is_err());
        assert!(DiscreteSpace::new(1, 1.0, -1.0, 1.0).is_err());
        assert!(DiscreteSpace::new(1, 1.0, 1.0, 0.0).is_err());
        assert!(ContinuousSpace::new(vec![1.0], vec![0.0]).is_err());
    }

    #[test]
    fn box_diameters() {
        let b = ContinuousSpace::new(vec![-1.0, 0.0], vec![1.0, 3.0]).unwrap();
        assert_eq!(b.diameter_linf(), 3.0);
        assert!((b.diameter_l2() - 13f64.sqrt()).abs() < 1e-15);
        assert!(b.diameter_l2() <= (b.dim() as f64).sqrt() * b.diameter_linf());
        assert_eq!(b.clamp(&[5.0, -1.0]), vec![1.0, 0.0]);
    }

    proptest! {
        #[test]
        fn enumeration_is_sorted_separated_and_member(
            d in 1usize..4, k in 0i64..3, tau_idx in 0usize..3, r in 0.5f64..4.0
        ) {
            let tau = [1.0, 0.5, 0.25][tau_idx];
            let s = DiscreteSpace::new(d, tau, k as f64 * tau, r).unwrap();
            let pts = s.points(1_000_000).unwrap();
            prop_assert!(pts.windows(2).all(|p| p[0].partial_cmp(&p[1]) == Some(std::cmp::Ordering::Less)));
            for (i, a) in pts.iter().enumerate() {
                prop_assert!(s.contains(a));
                for b in &pts[i + 1..] {
                    let dist: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
                    prop_assert!(dist >= tau - 1e-12);
                }
            }
            prop_assert_eq!(pts.clone(), s.points(1_000_000).unwrap());
        }
    }
}
