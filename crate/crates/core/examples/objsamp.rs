//! The sample-average mechanism on linear losses over a box, with its closed-form oracle.

use objpert::audit::random_box_instance;
use objpert::domain::{dataset_loss, PrivacyBudget};
use objpert::mechanisms::obj_samp;
use objpert::noise::RngStream;
use objpert::oracles::{BoxLinearOracle, LinearOracle};

fn main() -> objpert::Result<()> {
    let mut rng = RngStream::new(3, 0);
    let (data, _, space, g) = random_box_instance(2, 5000, &mut rng)?;
    let oracle = BoxLinearOracle::new(space.clone());
    let best = oracle.minimize_linear(&data, &[0.0, 0.0])?;
    let n = data.len() as f64;
    let budget = PrivacyBudget::with_inverse_square_delta(1.0, data.len())?;
    let run = obj_samp(&data, &space, &oracle, budget, g, 0.05, 0.0, &mut rng)?;
    let p = &run.params;
    println!("gamma {:.4}  m {}  rate {:.4}  lambda {:.4}", p.gamma, p.m, p.sigma, p.lambda);
    println!("average of {} answers {:?}", run.oracle_outputs.len(), run.average);
    println!("output {:?} (not projected)", run.record.w);
    println!("loss {:.4} vs optimum {:.4}", run.record.loss, dataset_loss(&data, &best.w)? / n);
    Ok(())
}
