//! Accuracy against ε for ObjDisc and RSPM; writes the result files to ./results.

use objpert::harness::{run_experiment, ExperimentConfig};

fn main() -> objpert::Result<()> {
    let cfg = ExperimentConfig { reps: 10, seed: 42, ..Default::default() };
    let res = run_experiment(&cfg)?;
    println!("non-private optimum {:.3}", res.meta.optimum_accuracy);
    for row in &res.summary {
        println!("{:<8} eps {:>4}  acc {:.3} ± {:.3}", row.mechanism, row.epsilon, row.mean_acc, row.sd_acc);
    }
    for b in &res.meta.bounds {
        println!("eps {:>4}: objdisc bound {:.3}, rspm bound {:.3} (up to constants)", b.epsilon, b.objdisc, b.rspm_up_to_constants);
    }
    println!("files in {}", cfg.out.display());
    Ok(())
}
