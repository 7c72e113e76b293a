//! Two-view relative pose estimation.
//!
//! The crate pairs a classic five-point RANSAC with an externally supplied
//! pose prior. The prior enters twice: it biases minimal-sample selection
//! toward correspondences that agree with it, and it adds a log-likelihood
//! term to every hypothesis score. Solver and prior poses are then blended in
//! the continuous 6D rotation space.
//!
//! Module map:
//!
//! - [`geometry`]: rotations, poses, essential matrices, Sampson error,
//!   triangulation and error metrics.
//! - [`solver`]: five-point minimal solver and normalized eight-point refit.
//! - [`robust`]: RANSAC and the prior-guided estimator.
//! - [`fusion`]: weighted pose blending and the two-round pipeline.
//! - [`synthbench`]: synthetic scenes, perturbation protocol and sweeps.

pub mod constants;
pub mod error;
pub mod fusion;
pub mod geometry;
pub mod rng;
pub mod robust;
pub mod solver;
pub mod synthbench;

pub use error::{Error, Result};
pub use fusion::{
    fusion_pipeline, fuse_poses, inlier_logistic_weight, FusionOutput, FusionWeights, LogisticParams,
    PriorContext, PriorProvider, WeightProvider,
};
pub use geometry::{
    CameraIntrinsics, Correspondence, CorrespondenceSet, EssentialMatrix, Pose6DoF, Rotation6D,
    RotationMatrix,
};
pub use robust::{prior_guided_ransac, ransac, RobustConfig, RobustEstimate, ScoredHypothesis};
