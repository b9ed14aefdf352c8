//! Empirical checks of the privacy analysis.
//!
//! - [`check_mapping_lemma`]: the shifted noise `η + c π(ŵ)` keeps `ŵ` optimal on a
//!   neighboring dataset.
//! - [`tie_rate`]: how often the perturbed normalized objective has several minimizers.
//! - [`estimate_stability`]: coupled estimate of `E‖O(D, η) − O(D′, η)‖₁`.
//! - [`check_concentration`]: deviation of an `m`-sample oracle average from its mean.
//! - [`audit_dp`]: pointwise `(ε, δ)` ratio test on a finite (or binned) output space.
//!
//! All verdicts are deterministic given the inputs and the stream.

mod dp;
mod instances;
mod mapping;
mod stability;

pub use dp::{audit_dp, clopper_pearson, AuditReport, CellCount, Cells, Verdict, CONFIDENCE_ALPHA};
pub use instances::random_box_instance;
pub use mapping::{
    check_mapping_lemma, mapping_experiment, shift_magnitudes, shift_map, tie_rate, MappingOutcome,
    MappingSummary,
};
pub use stability::{check_concentration, estimate_stability, ConcentrationReport, Estimate};
