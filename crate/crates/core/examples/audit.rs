//! Empirical checks: the minimizer-shift mapping under both shifts, and a pointwise
//! (ε, δ) audit of ObjDisc next to a noiseless version of it.

use objpert::audit::{audit_dp, mapping_experiment, Cells};
use objpert::domain::{Dataset, DiscreteSpace, LabeledExample, PrivacyBudget};
use objpert::mechanisms::{obj_disc, ExactPolicy};
use objpert::noise::RngStream;
use objpert::oracles::{ExhaustiveOracle, NormalizedOracle};

fn main() -> objpert::Result<()> {
    let rng = RngStream::new(1, 0);
    for row in mapping_experiment(300, 3, &[4.0, 2.0], &rng)? {
        println!(
            "shift {}GD²/τ: {} pass, {} skipped, {} violations",
            row.c_shift_factor, row.passes, row.skipped, row.violations
        );
    }

    // w = 1 wins on `data`; on `neighbor` all three points tie and w = -1 is reported
    let (pos, neg) = (LabeledExample::positive(vec![1.0])?, LabeledExample::negative(vec![1.0])?);
    let data = Dataset::new([vec![pos; 4], vec![neg.clone(); 2]].concat())?;
    let neighbor = data.neighbor(0, neg)?;
    let oracle = ExhaustiveOracle::new(DiscreteSpace::ternary_cube(1)?)?;
    let cells = Cells::Points(oracle.points().to_vec());
    let budget = PrivacyBudget::new(1.0, 1.0 / 36.0)?;

    let private = |d: &Dataset<LabeledExample>, r: &mut RngStream| Ok(obj_disc(d, &oracle, budget, 1.0, ExactPolicy::Require, r)?.w);
    let report = audit_dp(&private, &cells, &data, &neighbor, budget, 200_000, &rng)?;
    println!("objdisc: {:?}, worst ratio {:?}", report.verdict, report.worst_ratio);

    let leaky = |d: &Dataset<LabeledExample>, _: &mut RngStream| Ok(oracle.minimize_normalized(d, &[0.0, 0.0])?.w);
    let report = audit_dp(&leaky, &cells, &data, &neighbor, budget, 10_000, &rng)?;
    println!("no noise: {:?}, worst excess {:.3}", report.verdict, report.worst_excess);
    Ok(())
}
