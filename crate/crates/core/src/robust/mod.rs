//! Hypothesis search.
//!
//! [`ransac`] is the classic estimator: uniform minimal samples and
//! inlier-count scoring. [`prior_guided_ransac`] adds a prior pose `T₁` that
//! both augments the score (`α·β(H | T₁) + inliers`) and biases half of the
//! minimal samples toward correspondences that agree with `T₁`.

mod config;
mod engine;
mod prior;
mod sampling;
mod scoring;

pub use config::RobustConfig;
pub use engine::{prior_guided_ransac, ransac, search_hypotheses, HypothesisRecord, RobustEstimate};
pub use prior::{beta_prior, transform_discrepancy, PriorGrid};
pub use sampling::{sampling_weights, uniform_minimal_sample, weighted_minimal_sample};
pub use scoring::{count_inliers, score_hypothesis, ScoredHypothesis};
