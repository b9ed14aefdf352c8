//! Datasets, losses, parameter spaces and perturbed objectives.

mod budget;
mod dataset;
mod loss;
mod normalize;
mod objective;
mod space;

pub use budget::PrivacyBudget;
pub use dataset::{Dataset, WeightedDataset};
pub use loss::{zero_one_loss, Label, LabeledExample, LinearLoss, Loss, LossClassSpec};
pub use normalize::{project, BOUNDARY_SLACK};
pub use objective::{
    dataset_loss, dot, linear_objective, normalized_objective, perturbed_loss,
    perturbed_normalized_loss, weighted_objective,
};
pub use space::{enumerate_space, ContinuousSpace, DiscreteSpace, GridIter, DEFAULT_ENUMERATION_CAP};

pub(crate) mod objective_internals {
    pub(crate) use super::objective::{loss_sum, weighted_sum};
}
