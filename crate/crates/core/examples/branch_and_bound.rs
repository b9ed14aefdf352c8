//! Branch-and-bound against enumeration on a perturbed normalized problem.

use std::time::Instant;

use objpert::domain::DiscreteSpace;
use objpert::harness::synth_halfspace;
use objpert::noise::{gaussian_vector, RngStream};
use objpert::oracles::{exhaustive_normalized, BranchAndBound, MipInstance};

fn main() -> objpert::Result<()> {
    let d = 6;
    let data = synth_halfspace(300, d, 0.0, 0.1, 9)?.data;
    let space = DiscreteSpace::halfspace_grid(d)?;
    let eta = gaussian_vector(d + 1, 5.0, &mut RngStream::new(1, 0))?;

    let t = Instant::now();
    let truth = exhaustive_normalized(&data, &eta, &space)?;
    println!("enumeration: {:?} value {:.6} in {:?}", truth.w, truth.value, t.elapsed());

    let t = Instant::now();
    let inst = MipInstance::normalized(&data, &eta, &space)?;
    let (out, trace) = BranchAndBound::default().solve_traced(&inst)?;
    println!("branch-and-bound: {:?} value {:.6} in {:?}, {} nodes", out.w, out.value, t.elapsed(), out.nodes_explored);
    for (node, value) in trace {
        println!("  incumbent {value:.4} at node {node}");
    }
    Ok(())
}
