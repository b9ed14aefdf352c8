//! Writes the normalized MIP in MPS format for an external solver and reads it back.

use objpert::domain::DiscreteSpace;
use objpert::harness::synth_halfspace;
use objpert::oracles::mps::{import_mps, to_mps_string};
use objpert::oracles::MipInstance;

fn main() -> objpert::Result<()> {
    let data = synth_halfspace(4, 2, 0.0, 0.0, 1)?.data;
    let space = DiscreteSpace::halfspace_grid(2)?;
    let inst = MipInstance::normalized(&data, &[0.4, -0.1, 0.7], &space)?;
    let text = to_mps_string(&inst)?;
    print!("{text}");
    let path = std::env::temp_dir().join("objpert-example.mps");
    std::fs::write(&path, &text)?;
    println!("round trip equal: {}", import_mps(&path)?.approx_eq(&inst, 1e-12));
    Ok(())
}
