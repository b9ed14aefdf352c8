//! Separator-set baseline: check the separator, then run the mechanism.

use objpert::domain::{DiscreteSpace, PrivacyBudget};
use objpert::harness::synth_halfspace;
use objpert::mechanisms::{rspm, separator_candidate, verify_separator, SeparatorCheck};
use objpert::noise::RngStream;
use objpert::oracles::BranchAndBoundOracle;

fn main() -> objpert::Result<()> {
    let d = 3;
    // halfspaces cannot tell w from 2w, so the grid is {-1, 0, 1}^d
    let space = DiscreteSpace::new(d, 1.0, 1.0, (d as f64).sqrt())?;
    let sep = separator_candidate(d, 1.0)?;
    match verify_separator(&sep, &space)? {
        SeparatorCheck::Pass => println!("{} probes separate all {} points", sep.len(), space.points(u64::MAX)?.len()),
        SeparatorCheck::Counterexample(a, b) => println!("not a separator: {a:?} vs {b:?}"),
    }
    let data = synth_halfspace(150, d, 0.0, 0.05, 2)?.data;
    let oracle = BranchAndBoundOracle::new(space);
    let mut rng = RngStream::new(5, 0);
    for eps in [1.0, 4.0] {
        let rec = rspm(&data, &sep, &oracle, PrivacyBudget::with_inverse_square_delta(eps, 150)?, &mut rng)?;
        println!("eps {eps}: w = {:?}, loss {:.3}", rec.w, rec.loss);
    }
    Ok(())
}
