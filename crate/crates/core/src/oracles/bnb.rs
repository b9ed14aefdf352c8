//! Best-first branch-and-bound over the coordinates of a τ-grid.
//!
//! A node fixes a prefix `w_1..w_k` of grid values. Its lower bound adds three parts:
//!
//! - loss: examples whose margin sign is already decided contribute `p_i l_i`; undecided
//!   ones contribute `min(0, p_i)`. The free part of a margin is bounded by
//!   `min(Σ_free |x_j| Kτ, ‖x_free‖ r)` with `r = √(D² − ‖prefix‖²)`;
//! - linear reward: `−s(F + min(Σ_free |η_j| Kτ, ‖η_free‖ r))` where `F` is the fixed part
//!   and `s` is `1/D` in normalized mode;
//! - lift (normalized mode): `−η_{d+1} √(1 − ‖w‖²/D²)` bounded with the smallest or the
//!   largest attainable norm depending on the sign of `η_{d+1}`.
//!
//! Bounds carry a small relative slack so floating-point rounding never prunes the
//! numerical optimum. Leaves are evaluated with [`MipInstance::objective`], the same
//! arithmetic as the exhaustive oracles, and ties go to the lexicographically smallest
//! point, so both oracles return identical answers on every feasible instance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{LinearOracle, MipInstance, MipMode, NormalizedOracle, OracleOutcome, WeightedOracle};
use crate::domain::{Dataset, DiscreteSpace, Label, LabeledExample, WeightedDataset, BOUNDARY_SLACK};
use crate::error::Result;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

const BOUND_SLACK: f64 = 1e-9;

/// Solver settings.
#[derive(Clone, Copy, Debug)]
pub struct BranchAndBound {
    /// Nodes (expansions plus evaluated leaves) before giving up with `exact = false`.
    pub node_budget: u64,
}

impl Default for BranchAndBound {
    fn default() -> Self {
        Self { node_budget: DEFAULT_NODE_BUDGET }
    }
}

/// Solves `instance` with the default node budget.
pub fn bnb_solve(instance: &MipInstance) -> Result<OracleOutcome> {
    BranchAndBound::default().solve(instance)
}

struct Node {
    bound: f64,
    seq: u64,
    prefix: Vec<i64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // max-heap: smallest bound first, then FIFO
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Tables {
    /// `abs_suffix[i][k] = Σ_{j ≥ k} |x_ij|`
    abs_suffix: Vec<Vec<f64>>,
    sq_suffix: Vec<Vec<f64>>,
    eta_abs_suffix: Vec<f64>,
    eta_sq_suffix: Vec<f64>,
    weight_mass: f64,
}

fn suffix_sums(v: &[f64], f: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut out = vec![0.0; v.len() + 1];
    for j in (0..v.len()).rev() {
        out[j] = out[j + 1] + f(v[j]);
    }
    out
}

impl Tables {
    fn new(inst: &MipInstance) -> Self {
        let d = inst.dim();
        let lin = &inst.eta[..d];
        Self {
            abs_suffix: inst.examples.iter().map(|e| suffix_sums(&e.x, f64::abs)).collect(),
            sq_suffix: inst.examples.iter().map(|e| suffix_sums(&e.x, |v| v * v)).collect(),
            eta_abs_suffix: suffix_sums(lin, f64::abs),
            eta_sq_suffix: suffix_sums(lin, |v| v * v),
            weight_mass: inst.weights.iter().map(|p| p.abs()).sum(),
        }
    }
}

struct Search<'a> {
    inst: &'a MipInstance,
    tables: Tables,
    d: usize,
    k_max: i64,
    /// largest attainable |w_j|
    reach: f64,
    radius_sq: f64,
    lin_scale: f64,
}

/// Partial sums for a fixed prefix, accumulated left to right like [`crate::domain::dot`].
struct Prefix {
    margins: Vec<f64>,
    norm_sq: f64,
    linear: f64,
}

impl<'a> Search<'a> {
    fn new(inst: &'a MipInstance) -> Self {
        let space = &inst.space;
        let k_max = space.extent();
        Self {
            tables: Tables::new(inst),
            d: space.dim(),
            k_max,
            reach: space.grid_value(k_max),
            radius_sq: space.radius() * space.radius(),
            lin_scale: if inst.mode == MipMode::Normalized { 1.0 / space.radius() } else { 1.0 },
            inst,
        }
    }

    fn value(&self, k: i64) -> f64 {
        self.inst.space.grid_value(k)
    }

    fn ball_ok(&self, norm_sq: f64) -> bool {
        1.0 - norm_sq / self.radius_sq >= -BOUNDARY_SLACK
    }

    fn prefix_sums(&self, prefix: &[i64]) -> Prefix {
        let mut p = Prefix { margins: vec![0.0; self.inst.len()], norm_sq: 0.0, linear: 0.0 };
        for (j, &k) in prefix.iter().enumerate() {
            self.extend(&mut p, j, self.value(k));
        }
        p
    }

    fn extend(&self, p: &mut Prefix, j: usize, v: f64) {
        for (m, e) in p.margins.iter_mut().zip(&self.inst.examples) {
            *m += e.x[j] * v;
        }
        p.norm_sq += v * v;
        p.linear += self.inst.eta[j] * v;
    }

    /// Lower bound over all completions of a prefix of length `k`.
    fn bound(&self, p: &Prefix, k: usize) -> f64 {
        let r = (self.radius_sq - p.norm_sq).max(0.0).sqrt();
        let t = &self.tables;
        let mut loss = 0.0;
        for (i, (e, &m)) in self.inst.examples.iter().zip(&p.margins).enumerate() {
            let weight = self.inst.weights[i];
            let free = (t.abs_suffix[i][k] * self.reach).min(t.sq_suffix[i][k].sqrt() * r);
            let decided = if free == 0.0 {
                Some(Label::of_margin(m))
            } else {
                let slack = BOUND_SLACK * (1.0 + m.abs() + free);
                if m - free > slack {
                    Some(Label::Positive)
                } else if m + free < -slack {
                    Some(Label::Negative)
                } else {
                    None
                }
            };
            loss += match decided {
                Some(label) if label != e.y => weight,
                Some(_) => 0.0,
                None => weight.min(0.0),
            };
        }
        let free_lin = (t.eta_abs_suffix[k] * self.reach).min(t.eta_sq_suffix[k].sqrt() * r);
        let linear = -self.lin_scale * (p.linear + free_lin);
        let lift = match self.inst.mode {
            MipMode::Normalized => {
                let last = self.inst.eta[self.d];
                if last >= 0.0 {
                    -last * (1.0 - p.norm_sq / self.radius_sq).max(0.0).sqrt()
                } else {
                    let widest = (p.norm_sq + (self.d - k) as f64 * self.reach * self.reach)
                        .min(self.radius_sq);
                    -last * (1.0 - widest / self.radius_sq).max(0.0).sqrt()
                }
            }
            _ => 0.0,
        };
        let total = loss + linear + lift;
        let scale = 1.0 + t.weight_mass + linear.abs() + lift.abs() + self.inst.eta.iter().map(|v| v.abs()).sum::<f64>();
        total - BOUND_SLACK * scale
    }
}

struct Incumbent {
    w: Vec<f64>,
    ks: Vec<i64>,
    value: f64,
}

impl BranchAndBound {
    pub fn solve(&self, instance: &MipInstance) -> Result<OracleOutcome> {
        self.solve_traced(instance).map(|(out, _)| out)
    }

    /// Solves and also returns `(nodes so far, incumbent value)` at every incumbent update.
    pub fn solve_traced(&self, instance: &MipInstance) -> Result<(OracleOutcome, Vec<(u64, f64)>)> {
        instance.validate()?;
        let search = Search::new(instance);
        let d = search.d;

        // w = 0 is always feasible
        let zero = vec![0.0; d];
        let mut best = Incumbent { value: instance.objective(&zero)?, w: zero, ks: vec![0; d] };
        let mut nodes: u64 = 1;
        let mut trace = vec![(nodes, best.value)];

        let mut heap = BinaryHeap::new();
        let mut seq = 0u64;
        let root = search.prefix_sums(&[]);
        heap.push(Node { bound: search.bound(&root, 0), seq, prefix: Vec::new() });

        let mut exact = true;
        while let Some(node) = heap.pop() {
            if node.bound > best.value {
                break;
            }
            let k = node.prefix.len();
            if node.bound >= best.value && node.prefix.as_slice() > &best.ks[..k] {
                continue;
            }
            nodes += 1;
            if nodes > self.node_budget {
                exact = false;
                break;
            }
            let parent = search.prefix_sums(&node.prefix);
            for kv in -search.k_max..=search.k_max {
                let v = search.value(kv);
                let mut child = Prefix {
                    margins: parent.margins.clone(),
                    norm_sq: parent.norm_sq,
                    linear: parent.linear,
                };
                search.extend(&mut child, k, v);
                if !search.ball_ok(child.norm_sq) {
                    continue;
                }
                let mut prefix = node.prefix.clone();
                prefix.push(kv);
                if k + 1 == d {
                    let w: Vec<f64> = prefix.iter().map(|&q| search.value(q)).collect();
                    if !instance.space.in_ball(&w) {
                        continue;
                    }
                    nodes += 1;
                    let value = instance.objective(&w)?;
                    if value < best.value || (value == best.value && prefix < best.ks) {
                        best = Incumbent { w, ks: prefix, value };
                        trace.push((nodes, value));
                    }
                } else {
                    let bound = search.bound(&child, k + 1);
                    let dominated = bound > best.value
                        || (bound >= best.value && prefix.as_slice() > &best.ks[..k + 1]);
                    if !dominated {
                        seq += 1;
                        heap.push(Node { bound, seq, prefix });
                    }
                }
            }
        }
        let out = OracleOutcome { w: best.w, value: best.value, exact, nodes_explored: nodes };
        Ok((out, trace))
    }
}

/// [`BranchAndBound`] behind the oracle traits, for 0/1-loss data over a fixed space.
#[derive(Clone, Debug)]
pub struct BranchAndBoundOracle {
    space: DiscreteSpace,
    solver: BranchAndBound,
}

impl BranchAndBoundOracle {
    pub fn new(space: DiscreteSpace) -> Self {
        Self { space, solver: BranchAndBound::default() }
    }

    pub fn with_budget(space: DiscreteSpace, node_budget: u64) -> Self {
        Self { space, solver: BranchAndBound { node_budget } }
    }
}

impl NormalizedOracle<LabeledExample> for BranchAndBoundOracle {
    fn space(&self) -> &DiscreteSpace {
        &self.space
    }

    fn minimize_normalized(&self, data: &Dataset<LabeledExample>, eta: &[f64]) -> Result<OracleOutcome> {
        self.solver.solve(&MipInstance::normalized(data, eta, &self.space)?)
    }
}

impl LinearOracle<LabeledExample> for BranchAndBoundOracle {
    fn minimize_linear(&self, data: &Dataset<LabeledExample>, eta: &[f64]) -> Result<OracleOutcome> {
        self.solver.solve(&MipInstance::linear(data, eta, &self.space)?)
    }
}

impl WeightedOracle<LabeledExample> for BranchAndBoundOracle {
    fn minimize_weighted(&self, data: &WeightedDataset<LabeledExample>) -> Result<OracleOutcome> {
        self.solver.solve(&MipInstance::weighted(data, &self.space)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{gaussian_vector, RngStream};
    use crate::oracles::{exhaustive_linear, exhaustive_normalized, exhaustive_weighted};
    use rand::Rng;

    fn random_data(d: usize, n: usize, rng: &mut RngStream) -> Dataset<LabeledExample> {
        let items = (0..n)
            .map(|_| {
                let x = gaussian_vector(d, 1.0, rng).unwrap();
                let y = if rng.random::<bool>() { Label::Positive } else { Label::Negative };
                LabeledExample::new(x, y).unwrap()
            })
            .collect();
        Dataset::with_dim(d, items).unwrap()
    }

    #[test]
    fn empty_data_follows_the_reward() {
        let space = DiscreteSpace::halfspace_grid(2).unwrap();
        let data = Dataset::with_dim(2, vec![]).unwrap();
        let out = bnb_solve(&MipInstance::linear(&data, &[5.0, 0.0], &space).unwrap()).unwrap();
        // (1, −1), (1, 0) and (1, 1) tie; the lexicographically smallest wins
        assert_eq!(out.w, vec![1.0, -1.0]);
        assert_eq!(out.w, exhaustive_linear(&data, &[5.0, 0.0], &space).unwrap().w);
        assert!(out.exact);
    }

    #[test]
    fn positive_lift_reward_picks_the_pole() {
        let space = DiscreteSpace::halfspace_grid(3).unwrap();
        let data = Dataset::with_dim(3, vec![]).unwrap();
        let out = bnb_solve(&MipInstance::normalized(&data, &[0.0, 0.0, 0.0, 2.0], &space).unwrap()).unwrap();
        assert_eq!(out.w, vec![0.0; 3]);
    }

    #[test]
    fn matches_exhaustive_on_random_instances() {
        let mut rng = RngStream::new(11, 0);
        for trial in 0..150 {
            let d = 1 + trial % 4;
            let n = rng.random_range(0..30);
            let data = random_data(d, n, &mut rng);
            let space = DiscreteSpace::halfspace_grid(d).unwrap();
            let scale = [0.1, 1.0, 10.0][trial % 3];
            let eta = gaussian_vector(d + 1, scale, &mut rng).unwrap();
            let out = bnb_solve(&MipInstance::normalized(&data, &eta, &space).unwrap()).unwrap();
            let truth = exhaustive_normalized(&data, &eta, &space).unwrap();
            assert!(out.exact);
            assert_eq!(out.value, truth.value, "trial {trial}");
            assert_eq!(out.w, truth.w, "trial {trial}");

            let lin = &eta[..d];
            let out = bnb_solve(&MipInstance::linear(&data, lin, &space).unwrap()).unwrap();
            assert_eq!(out.w, exhaustive_linear(&data, lin, &space).unwrap().w, "trial {trial}");
        }
    }

    #[test]
    fn weighted_with_negative_weights_matches_exhaustive() {
        let mut rng = RngStream::new(12, 0);
        for _ in 0..60 {
            let d = rng.random_range(1..4);
            let data = random_data(d, 10, &mut rng);
            let weights = gaussian_vector(10, 3.0, &mut rng).unwrap();
            let wd = WeightedDataset::new(d, data.items().iter().cloned().zip(weights).collect()).unwrap();
            let space = DiscreteSpace::ternary_cube(d).unwrap();
            let out = bnb_solve(&MipInstance::weighted(&wd, &space).unwrap()).unwrap();
            let truth = exhaustive_weighted(&wd, &space).unwrap();
            assert_eq!((out.w, out.value), (truth.w, truth.value));
        }
    }

    #[test]
    fn incumbent_never_increases() {
        let mut rng = RngStream::new(13, 0);
        let data = random_data(4, 40, &mut rng);
        let space = DiscreteSpace::new(4, 1.0, 3.0, 3.0).unwrap();
        let eta = gaussian_vector(5, 3.0, &mut rng).unwrap();
        let (_, trace) = BranchAndBound::default()
            .solve_traced(&MipInstance::normalized(&data, &eta, &space).unwrap())
            .unwrap();
        assert!(trace.windows(2).all(|p| p[1].1 <= p[0].1 && p[1].0 >= p[0].0));
    }

    #[test]
    fn exhausted_budget_is_flagged() {
        let mut rng = RngStream::new(14, 0);
        let data = random_data(4, 40, &mut rng);
        let space = DiscreteSpace::new(4, 1.0, 3.0, 3.0).unwrap();
        let eta = gaussian_vector(5, 1.0, &mut rng).unwrap();
        let inst = MipInstance::normalized(&data, &eta, &space).unwrap();
        let out = BranchAndBound { node_budget: 3 }.solve(&inst).unwrap();
        assert!(!out.exact);
        assert!(space.contains(&out.w));
    }
}
