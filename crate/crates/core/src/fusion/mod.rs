//! Pose fusion and the two-round estimation pipeline.
//!
//! A regressed pose `T_t` (here supplied by a [`PriorProvider`]) and a solver
//! pose are blended with separate rotation and translation weights. Rotations
//! are blended in the 6D representation; the solver's unit translation takes
//! its scale from `T_t`.

mod blend;
mod pipeline;
mod providers;

pub use blend::{fuse_poses, inlier_logistic_weight, FusionWeights, LogisticParams};
pub use pipeline::{fusion_pipeline, FusionOutput};
pub use providers::{PoseRecord, PriorContext, PriorProvider, WeightProvider, WeightsRecord};
