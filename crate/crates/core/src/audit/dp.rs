use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::domain::{Dataset, PrivacyBudget};
use crate::error::{Error, Result};
use crate::noise::RngStream;

/// Two-sided miss probability of a 3-sigma interval.
pub const CONFIDENCE_ALPHA: f64 = 0.0027;

const MAX_CELLS: usize = 1000;
const CHUNK: u64 = 4096;

/// Clopper–Pearson interval for `k` successes in `n` trials at level `1 − alpha`.
pub fn clopper_pearson(k: u64, n: u64, alpha: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (kf, nf) = (k as f64, n as f64);
    let lower = if k == 0 {
        0.0
    } else {
        Beta::new(kf, nf - kf + 1.0).map_or(0.0, |b| b.inverse_cdf(alpha / 2.0))
    };
    let upper = if k == n {
        1.0
    } else {
        Beta::new(kf + 1.0, nf - kf).map_or(1.0, |b| b.inverse_cdf(1.0 - alpha / 2.0))
    };
    (lower, upper)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// How mechanism outputs are mapped to finitely many cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Cells {
    /// Outputs must equal one of these points exactly.
    Points(Vec<Vec<f64>>),
    /// `bins` equal bins per coordinate over `[lo, hi]`; values outside land in the end bins.
    Grid { dim: usize, lo: f64, hi: f64, bins: usize },
}

impl Cells {
    pub fn count(&self) -> Result<usize> {
        let n = match self {
            Cells::Points(p) => p.len(),
            Cells::Grid { dim, bins, lo, hi } => {
                if !(hi > lo) || *bins == 0 {
                    return Err(Error::Discretization("empty bin range".into()));
                }
                (*bins as f64).powi(*dim as i32).min(usize::MAX as f64) as usize
            }
        };
        if n == 0 || n > MAX_CELLS {
            return Err(Error::Discretization(format!("{n} cells; at most {MAX_CELLS} are supported")));
        }
        Ok(n)
    }

    pub fn index(&self, w: &[f64]) -> Result<usize> {
        match self {
            Cells::Points(points) => points
                .iter()
                .position(|p| p.as_slice() == w)
                .ok_or_else(|| Error::Discretization(format!("output {w:?} is not a listed point"))),
            Cells::Grid { dim, lo, hi, bins } => {
                if w.len() != *dim {
                    return Err(Error::DimensionMismatch { expected: *dim, got: w.len() });
                }
                let mut idx = 0;
                for &v in w {
                    let t = ((v - lo) / (hi - lo) * *bins as f64).floor();
                    let b = if t.is_nan() { 0 } else { t.clamp(0.0, (*bins - 1) as f64) as usize };
                    idx = idx * bins + b;
                }
                Ok(idx)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellCount {
    pub cell: usize,
    pub count: u64,
    pub count_neighbor: u64,
}

/// Result of [`audit_dp`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    /// Always `"pointwise"`: singleton output cells stand in for arbitrary events.
    pub test: String,
    pub epsilon: f64,
    pub delta: f64,
    /// Samples per dataset.
    pub trials: u64,
    /// Cell-direction pairs whose point estimates break `p − δ ≤ e^ε p′`.
    pub violations: u64,
    /// Largest `p̂ / p̂′` over cells seen under both datasets; `None` when there are none.
    pub worst_ratio: Option<f64>,
    /// Largest `p̂ − δ − e^ε p̂′`.
    pub worst_excess: f64,
    /// Largest Clopper–Pearson half-width over all cells.
    pub half_width: f64,
    pub verdict: Verdict,
    pub cells: Vec<CellCount>,
}

fn tally<L, M>(mech: &M, data: &Dataset<L>, cells: &Cells, n_cells: usize, trials: u64, rng: &RngStream) -> Result<Vec<u64>>
where
    L: Sync,
    M: Fn(&Dataset<L>, &mut RngStream) -> Result<Vec<f64>> + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let partial = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng.child(c);
            let mut counts = vec![0u64; n_cells];
            let end = ((c + 1) * CHUNK).min(trials);
            for _ in c * CHUNK..end {
                counts[cells.index(&mech(data, &mut r)?)?] += 1;
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = vec![0u64; n_cells];
    for counts in partial {
        for (t, c) in total.iter_mut().zip(counts) {
            *t += c;
        }
    }
    Ok(total)
}

/// Pointwise `(ε, δ)` audit of `mech` on the pair `(data, neighbor)`.
///
/// Each dataset gets `trials` runs; the two sample sets use `rng.child(0)` and
/// `rng.child(1)`, split into fixed chunks so the counts do not depend on thread count.
/// For every cell and both directions, the audit fails when the lower confidence bound of
/// `p` minus `δ` exceeds `e^ε` times the upper bound of `p′`, and is inconclusive when only
/// the point estimates break the inequality.
pub fn audit_dp<L, M>(
    mech: &M,
    cells: &Cells,
    data: &Dataset<L>,
    neighbor: &Dataset<L>,
    budget: PrivacyBudget,
    trials: u64,
    rng: &RngStream,
) -> Result<AuditReport>
where
    L: PartialEq + Sync,
    M: Fn(&Dataset<L>, &mut RngStream) -> Result<Vec<f64>> + Sync,
{
    data.differing_index(neighbor)?;
    if trials == 0 {
        return Err(Error::invalid("trials", "must be positive"));
    }
    let n_cells = cells.count()?;
    let a = tally(mech, data, cells, n_cells, trials, &rng.child(0))?;
    let b = tally(mech, neighbor, cells, n_cells, trials, &rng.child(1))?;
    let (eps, delta) = (budget.epsilon(), budget.delta());
    let growth = eps.exp();
    let nf = trials as f64;

    let mut report = AuditReport {
        test: "pointwise".into(),
        epsilon: eps,
        delta,
        trials,
        violations: 0,
        worst_ratio: None,
        worst_excess: f64::NEG_INFINITY,
        half_width: 0.0,
        verdict: Verdict::Pass,
        cells: Vec::new(),
    };
    let mut strict = false;
    for cell in 0..n_cells {
        let (ka, kb) = (a[cell], b[cell]);
        if ka > 0 || kb > 0 {
            report.cells.push(CellCount { cell, count: ka, count_neighbor: kb });
        }
        let ia = clopper_pearson(ka, trials, CONFIDENCE_ALPHA);
        let ib = clopper_pearson(kb, trials, CONFIDENCE_ALPHA);
        report.half_width = report.half_width.max((ia.1 - ia.0) / 2.0).max((ib.1 - ib.0) / 2.0);
        let (pa, pb) = (ka as f64 / nf, kb as f64 / nf);
        if ka > 0 && kb > 0 {
            let r = (pa / pb).max(pb / pa);
            report.worst_ratio = Some(report.worst_ratio.map_or(r, |w: f64| w.max(r)));
        }
        for ((p, lo), (q, hi)) in [((pa, ia.0), (pb, ib.1)), ((pb, ib.0), (pa, ia.1))] {
            let excess = p - delta - growth * q;
            report.worst_excess = report.worst_excess.max(excess);
            if excess > 0.0 {
                report.violations += 1;
            }
            if lo - delta > growth * hi {
                strict = true;
            }
        }
    }
    report.verdict = if strict {
        Verdict::Fail
    } else if report.violations > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{DiscreteSpace, LabeledExample};
    use crate::mechanisms::{obj_disc_with_noise, sigma_objdisc, ExactPolicy};
    use crate::noise::gaussian_vector;
    use crate::oracles::{ExhaustiveOracle, NormalizedOracle};

    #[test]
    fn clopper_pearson_reference_values() {
        // k = 0: upper = 1 − (α/2)^(1/n)
        let (lo, hi) = clopper_pearson(0, 100, 0.05);
        assert_eq!(lo, 0.0);
        assert!((hi - (1.0 - 0.025f64.powf(0.01))).abs() < 1e-9);
        let (lo, hi) = clopper_pearson(100, 100, 0.05);
        assert!((lo - 0.025f64.powf(0.01)).abs() < 1e-9);
        assert_eq!(hi, 1.0);
        let (lo, hi) = clopper_pearson(50, 100, 0.05);
        assert!(lo < 0.5 && hi > 0.5 && ((0.5 - lo) - (hi - 0.5)).abs() < 1e-9);
    }

    #[test]
    fn grid_cells() {
        let cells = Cells::Grid { dim: 2, lo: -1.0, hi: 1.0, bins: 4 };
        assert_eq!(cells.count().unwrap(), 16);
        assert_eq!(cells.index(&[-5.0, 5.0]).unwrap(), 3);
        assert_eq!(cells.index(&[0.1, -0.6]).unwrap(), 2 * 4);
        assert!(Cells::Grid { dim: 4, lo: 0.0, hi: 1.0, bins: 10 }.count().is_err());
    }

    fn setup() -> (ExhaustiveOracle, Dataset<LabeledExample>, Dataset<LabeledExample>) {
        let oracle = ExhaustiveOracle::new(DiscreteSpace::new(1, 1.0, 1.0, 1.0).unwrap()).unwrap();
        let data = Dataset::new(vec![LabeledExample::positive(vec![1.0]).unwrap(); 6]).unwrap();
        let neighbor = data.neighbor(0, LabeledExample::negative(vec![1.0]).unwrap()).unwrap();
        (oracle, data, neighbor)
    }

    #[test]
    fn noiseless_mechanism_fails() {
        let (oracle, _, _) = setup();
        let cells = Cells::Points(oracle.points().to_vec());
        let budget = PrivacyBudget::new(1.0, 1.0 / 36.0).unwrap();
        let data = Dataset::new(vec![LabeledExample::positive(vec![1.0]).unwrap()]).unwrap();
        let flipped = data.neighbor(0, LabeledExample::negative(vec![1.0]).unwrap()).unwrap();
        // σ = 0: the output is 1 on one dataset and −1 on the other
        let mech = |d: &Dataset<LabeledExample>, _: &mut RngStream| {
            Ok(obj_disc_with_noise(d, &oracle, &[0.0, 0.0], ExactPolicy::Require)?.w)
        };
        let rep = audit_dp(&mech, &cells, &data, &flipped, budget, 2000, &RngStream::new(0, 0)).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert_eq!(rep.worst_ratio, None);
    }

    #[test]
    fn identical_data_passes() {
        let (oracle, data, _) = setup();
        let cells = Cells::Points(oracle.points().to_vec());
        let budget = PrivacyBudget::new(1.0, 1.0 / 36.0).unwrap();
        let sigma = sigma_objdisc(1.0, 1.0, 1.0, 1.0, budget.delta()).unwrap();
        let mech = |d: &Dataset<LabeledExample>, r: &mut RngStream| {
            let eta = gaussian_vector(2, sigma, r)?;
            Ok(oracle.minimize_normalized(d, &eta)?.w)
        };
        let rep = audit_dp(&mech, &cells, &data, &data, budget, 50_000, &RngStream::new(1, 0)).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.worst_ratio.unwrap() < 1.1);
        let again = audit_dp(&mech, &cells, &data, &data, budget, 50_000, &RngStream::new(1, 0)).unwrap();
        assert_eq!(rep, again);
    }
}
