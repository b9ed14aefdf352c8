//! Private 0/1-loss halfspace learning on a discrete grid.

use objpert::domain::{DiscreteSpace, LossClassSpec, PrivacyBudget};
use objpert::harness::synth_halfspace;
use objpert::mechanisms::{obj_disc, ExactPolicy};
use objpert::noise::RngStream;
use objpert::oracles::ExhaustiveOracle;

fn main() -> objpert::Result<()> {
    let s = synth_halfspace(200, 3, 0.0, 0.05, 1)?;
    let space = DiscreteSpace::halfspace_grid(3)?;
    let g = LossClassSpec::zero_one(space.step())?.lipschitz;
    let oracle = ExhaustiveOracle::new(space)?;
    println!("planted {:?}, loss {}", s.planted, s.planted_loss / 200.0);
    for eps in [0.5, 2.0, 8.0] {
        let budget = PrivacyBudget::with_inverse_square_delta(eps, 200)?;
        let mut rng = RngStream::new(7, 0);
        let rec = obj_disc(&s.data, &oracle, budget, g, ExactPolicy::Require, &mut rng)?;
        println!("eps {eps:>4}: w = {:?}, loss {:.3}, sigma {:.1}", rec.w, rec.loss, rec.params["sigma"]);
    }
    Ok(())
}
