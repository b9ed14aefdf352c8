use rand::Rng;

use crate::domain::{ContinuousSpace, Dataset, LinearLoss};
use crate::error::Result;
use crate::noise::RngStream;

/// A random linear-loss neighbor pair over `[−1, 1]^d`.
///
/// Each loss is `<c, w> + 1/2` with `c` uniform in `[−1/(2d), 1/(2d)]^d`, so values stay in
/// `[0, 1]` on the box and the ℓ1-Lipschitz constant is `G = max |c_j| ≤ 1/(2d)`. The
/// neighbor replaces a random record with a fresh draw.
pub fn random_box_instance(
    dim: usize,
    n: usize,
    rng: &mut RngStream,
) -> Result<(Dataset<LinearLoss>, Dataset<LinearLoss>, ContinuousSpace, f64)> {
    let half = 0.5 / dim as f64;
    let draw = |rng: &mut RngStream| {
        let coef = (0..dim).map(|_| rng.random_range(-half..=half)).collect();
        LinearLoss::new(coef, 0.5)
    };
    let items = (0..n).map(|_| draw(rng)).collect::<Result<Vec<_>>>()?;
    let data = Dataset::new(items)?;
    let idx = rng.random_range(0..n);
    let neighbor = data.neighbor(idx, draw(rng)?)?;
    let g = data
        .iter()
        .chain(neighbor.iter())
        .map(|l| l.l1_lipschitz())
        .fold(0.0, f64::max);
    Ok((data, neighbor, ContinuousSpace::cube(dim, -1.0, 1.0)?, g))
}
