//! Private mechanisms, their noise scales and utility bounds.
//!
//! - [`obj_disc`]: Gaussian objective perturbation over a τ-separated grid, solved by a
//!   normalized oracle.
//! - [`obj_samp`]: averaged exponential objective perturbation with a Laplace output
//!   step, for convex losses over a box.
//! - [`rspm`]: report-separator-perturbed-minimum, solved by a weighted oracle.

mod bounds;
mod obj_disc;
mod obj_samp;
mod params;
mod record;
mod rspm;
mod separator;

pub use bounds::{bound_objdisc, bound_objsamp, bound_rspm};
pub use obj_disc::{obj_disc, obj_disc_with_noise, ExactPolicy};
pub use obj_samp::{obj_samp, obj_samp_with_noise, ObjSampRun};
pub use params::{sigma_objdisc, sigma_rspm, ObjSampParams};
pub use record::RunRecord;
pub use rspm::{rspm, rspm_with_noise};
pub use separator::{separator_candidate, verify_separator, SeparatorCheck, SeparatorSet};
